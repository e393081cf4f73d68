use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::format_float;
use crate::error::{Error, Result};
use crate::flows::problems::Problem;
use crate::flows::{
    scovel, symmetrize_selfadjoint, symmetry_defect, thue_morse, yoshida, Conjugation, DefectMode,
    Flow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeScheme {
    Scovel,
    ThueMorse,
    Yoshida,
    SelfAdjoint,
}

impl fmt::Display for ComposeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComposeScheme::Scovel => "scovel",
            ComposeScheme::ThueMorse => "tm",
            ComposeScheme::Yoshida => "yoshida",
            ComposeScheme::SelfAdjoint => "selfadjoint",
        })
    }
}

impl FromStr for ComposeScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scovel" => Ok(ComposeScheme::Scovel),
            "tm" => Ok(ComposeScheme::ThueMorse),
            "yoshida" => Ok(ComposeScheme::Yoshida),
            "selfadjoint" => Ok(ComposeScheme::SelfAdjoint),
            other => Err(Error::InvalidConfig(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComposeConfig {
    pub scheme: ComposeScheme,
    pub levels: u32,
    pub problem: String,
    pub hmax: f64,
    pub rungs: usize,
}

/// One `(level, h)` measurement of a composition scheme on a test problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposeRow {
    pub scheme: ComposeScheme,
    pub level: u32,
    pub h: f64,
    pub global_error: f64,
    /// Absent when the problem has no state symmetry.
    pub symmetry_error: Option<f64>,
    /// Absent when the problem has no reversing symmetry.
    pub reversing_error: Option<f64>,
    /// Base steps taken.
    pub steps: usize,
}

pub const COMPOSE_CSV_HEADER: [&str; 7] = [
    "scheme",
    "level",
    "h",
    "global_error",
    "symmetry_error",
    "reversing_error",
    "steps",
];

/// The flow measured at `level`:
///
/// - `scovel`: level 0 is the first-order base, level 1 its Scovel
///   projection for the reversing symmetry (time reversal when the problem
///   has none); higher levels are not defined.
/// - `tm`: Thue–Morse level `k` of the first-order base for the symmetry.
/// - `yoshida`: `k` nested triple jumps of the self-adjoint base (order
///   `2k + 2`).
/// - `selfadjoint`: `k` positive-step symmetrization levels of the
///   self-adjoint base for the symmetry.
pub fn compose_flow(problem: &Problem, scheme: ComposeScheme, level: u32) -> Result<Flow> {
    let need_symmetry = || {
        problem.symmetry().cloned().ok_or_else(|| {
            Error::InvalidConfig(format!(
                "scheme '{scheme}' needs a state symmetry; problem '{}' has none",
                problem.name
            ))
        })
    };
    Ok(match scheme {
        ComposeScheme::Scovel => match level {
            0 => problem.first_order(),
            1 => {
                let conj = match problem.reversing() {
                    Some(r) => Conjugation::State(r.clone()),
                    None => Conjugation::TimeReversal,
                };
                scovel(&problem.first_order(), &conj)
            }
            _ => {
                return Err(Error::InvalidConfig(
                    "scovel has levels 0 (base) and 1 only".into(),
                ))
            }
        },
        ComposeScheme::ThueMorse => {
            thue_morse(&problem.first_order(), &need_symmetry()?, level, false)
        }
        ComposeScheme::Yoshida => {
            let mut f = problem.selfadjoint();
            for p in 1..=level {
                f = yoshida(&f, p);
            }
            f
        }
        ComposeScheme::SelfAdjoint => {
            symmetrize_selfadjoint(&problem.selfadjoint(), &need_symmetry()?, 1, level)
        }
    })
}

/// Runs every level `0..=levels` on the ladder `hmax·2^{−i}`. Each rung is
/// shrunk so that a whole number of macro-steps reaches `t_end`.
pub fn run_compose(cfg: &ComposeConfig) -> Result<Vec<ComposeRow>> {
    if !(cfg.hmax > 0.0 && cfg.hmax.is_finite()) || cfg.rungs == 0 {
        return Err(Error::InvalidConfig(
            "need hmax > 0 and at least one rung".into(),
        ));
    }
    let problem = Problem::by_name(&cfg.problem)?;
    let levels = match cfg.scheme {
        ComposeScheme::Scovel => cfg.levels.min(1),
        _ => cfg.levels,
    };
    let exact = problem.exact(problem.t_end)?;
    let mut rows = Vec::new();
    for level in 0..=levels {
        let flow = compose_flow(&problem, cfg.scheme, level)?;
        let period = flow.period();
        for i in 0..cfg.rungs {
            let target = cfg.hmax / 2f64.powi(i as i32);
            let macros = ((problem.t_end / (period as f64 * target)) - 1e-9)
                .ceil()
                .max(1.0) as usize;
            let steps = macros * period;
            let h = problem.t_end / steps as f64;
            let y = flow.run(h, &problem.y0, macros)?;
            let defect = |t: Option<&crate::flows::InvolutiveStateMap>, mode| {
                t.map(|t| symmetry_defect(&flow, t, &problem.y0, h, steps, mode))
                    .transpose()
            };
            rows.push(ComposeRow {
                scheme: cfg.scheme,
                level,
                h,
                global_error: (y - &exact).amax(),
                symmetry_error: defect(problem.symmetry(), DefectMode::Symmetry)?,
                reversing_error: defect(problem.reversing(), DefectMode::Reversing)?,
                steps,
            });
        }
    }
    Ok(rows)
}

pub fn write_compose_csv<W: Write>(rows: &[ComposeRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COMPOSE_CSV_HEADER)?;
    let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.scheme.to_string(),
            r.level.to_string(),
            format_float(r.h),
            format_float(r.global_error),
            opt(r.symmetry_error),
            opt(r.reversing_error),
            r.steps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
