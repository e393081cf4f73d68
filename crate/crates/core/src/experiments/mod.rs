//! The two PDE experiments: Thue–Morse symmetrization of an
//! alternating-directions scheme, and the stiff reaction–diffusion problem
//! comparing Yoshida's triple jump with the positive-step self-adjoint
//! symmetrization. Results are emitted as [`ResultRow`]s and CSV. The
//! composition schemes on the small ODE test problems are run by
//! [`run_compose`].

mod altdir;
mod compose;
mod grid;
mod stiff;

pub use altdir::{altdir_flows, run_altdir_experiment, AltdirFlows};
pub use compose::{
    compose_flow, run_compose, write_compose_csv, ComposeConfig, ComposeRow, ComposeScheme,
    COMPOSE_CSV_HEADER,
};
pub use grid::{
    apply_stencil_x, central_difference, circulant, laplacian_1d, transpose_map, GridState,
};
pub use stiff::{find_stable_step, run_stiff_experiment, stiff_base_flow, StiffProblem};

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::flows::{Flow, State};

/// Field norm beyond which a run counts as diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

/// Reference solutions use the base scheme at `h_min / REFERENCE_REFINEMENT`.
pub const REFERENCE_REFINEMENT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    Altdir,
    Stiff,
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentId::Altdir => "altdir",
            ExperimentId::Stiff => "stiff",
        })
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "altdir" => Ok(ExperimentId::Altdir),
            "stiff" => Ok(ExperimentId::Stiff),
            other => Err(Error::InvalidConfig(format!(
                "unknown experiment '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    /// Points per dimension.
    pub grid: usize,
    /// Half-width `L` of the periodic box `[−L, L)²`.
    pub half_width: f64,
    /// Coefficient of the nonlinearity (`c·u²` for altdir; scales
    /// `−u(u−1)²` for stiff).
    pub nonlinearity: f64,
    /// altdir: fixed step of the forward-Euler run. stiff: top rung of the
    /// ladder; `None` means `3h₀` from the stability bisection.
    pub h: Option<f64>,
    /// altdir: top rung of the Heun ladder.
    pub hmax: f64,
    pub rungs: usize,
    /// Highest Thue–Morse level (altdir).
    pub levels: u32,
    pub t_end: f64,
    /// altdir: number of forward-Euler steps at the fixed step.
    pub fixed_steps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// `u_t = u_x + u_y + 2·10⁻³u²`, `u₀ = e^{−x²−y²}` on `[−5, 5)²`, 64².
    pub fn altdir() -> Self {
        Self {
            experiment: ExperimentId::Altdir,
            grid: 64,
            half_width: 5.0,
            nonlinearity: 2e-3,
            h: Some(1e-2),
            hmax: 0.1,
            rungs: 5,
            levels: 3,
            t_end: 1.6,
            fixed_steps: 128,
            seed: 0,
            out: None,
        }
    }

    /// `u_t = ∇²u − u(u−1)²`, `u₀ = e^{−9x²−9y²}` on `[−1, 1)²`, `δ = 0.1`.
    pub fn stiff() -> Self {
        Self {
            experiment: ExperimentId::Stiff,
            grid: 20,
            half_width: 1.0,
            nonlinearity: 1.0,
            h: None,
            hmax: 0.0,
            rungs: 7,
            levels: 1,
            t_end: 0.25,
            fixed_steps: 0,
            seed: 0,
            out: None,
        }
    }

    pub fn default_for(id: ExperimentId) -> Self {
        match id {
            ExperimentId::Altdir => Self::altdir(),
            ExperimentId::Stiff => Self::stiff(),
        }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.grid as f64
    }

    /// Sets the grid from a spacing `δ`, keeping the box.
    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        let n = (2.0 * self.half_width / delta).round();
        if !(n >= 3.0) || ((n * delta) - 2.0 * self.half_width).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "spacing {delta} does not divide the box [−{L}, {L})",
                L = self.half_width
            )));
        }
        self.grid = n as usize;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.grid < 3 {
            return bad(format!(
                "grid must have at least 3 points, got {}",
                self.grid
            ));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return bad("half-width must be positive".into());
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("end time must be positive".into());
        }
        if self.rungs < 2 {
            return bad("ladder needs at least 2 rungs".into());
        }
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return bad("step must be positive".into());
            }
        }
        if self.experiment == ExperimentId::Altdir {
            if !(self.hmax > 0.0 && self.hmax.is_finite()) {
                return bad("hmax must be positive".into());
            }
            let period = 1usize << self.levels;
            for i in 0..self.rungs {
                let h = self.hmax / f64::from(1u32 << i);
                steps_for(self.t_end, h, period)?;
            }
        }
        Ok(())
    }
}

/// Number of base steps of size `h` reaching `t_end`, which must be an exact
/// multiple of `period`.
pub fn steps_for(t_end: f64, h: f64, period: usize) -> Result<usize> {
    let n = (t_end / h).round();
    if n < 1.0 || (n * h - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return Err(Error::InvalidConfig(format!(
            "end time {t_end} is not a multiple of the step {h}"
        )));
    }
    let n = n as usize;
    if n % period != 0 {
        return Err(Error::InvalidConfig(format!(
            "{n} steps of {h} are not a multiple of the macro-step period {period}"
        )));
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Diverged,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::Diverged => "diverged",
        })
    }
}

/// One `(scheme, level, h)` measurement. Diverged rows carry no errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scheme: String,
    pub level: u32,
    pub h: f64,
    pub global_error: Option<f64>,
    pub symmetry_error: Option<f64>,
    pub status: RowStatus,
}

impl ResultRow {
    pub fn ok(scheme: &str, level: u32, h: f64, global: f64, symmetry: f64) -> Self {
        Self {
            scheme: scheme.into(),
            level,
            h,
            global_error: Some(global),
            symmetry_error: Some(symmetry),
            status: RowStatus::Ok,
        }
    }

    pub fn diverged(scheme: &str, level: u32, h: f64) -> Self {
        Self {
            scheme: scheme.into(),
            level,
            h,
            global_error: None,
            symmetry_error: None,
            status: RowStatus::Diverged,
        }
    }
}

pub const CSV_HEADER: [&str; 6] = [
    "scheme",
    "level",
    "h",
    "global_error",
    "symmetry_error",
    "status",
];

/// Floats with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn write_rows_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.scheme.clone(),
            r.level.to_string(),
            format_float(r.h),
            opt(r.global_error),
            opt(r.symmetry_error),
            r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    match cfg.experiment {
        ExperimentId::Altdir => run_altdir_experiment(cfg),
        ExperimentId::Stiff => run_stiff_experiment(cfg),
    }
}

/// Runs `macros` applications of `flow`, failing with [`Error::Diverged`]
/// once the field leaves `[−10⁶, 10⁶]` or becomes non-finite.
pub fn run_guarded(flow: &Flow, h: f64, y0: &State, macros: usize) -> Result<State> {
    let mut y = y0.clone();
    for _ in 0..macros {
        y = flow.step(h, &y)?;
        if y.iter()
            .any(|v| !v.is_finite() || v.abs() > DIVERGENCE_THRESHOLD)
        {
            return Err(Error::Diverged);
        }
    }
    Ok(y)
}

/// Whether an error means the run blew up (as opposed to a usage error).
pub(crate) fn is_divergence(e: &Error) -> bool {
    matches!(
        e,
        Error::Diverged | Error::NonFinite | Error::Singular | Error::NoConvergence { .. }
    )
}
