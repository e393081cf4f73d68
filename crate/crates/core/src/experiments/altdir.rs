use std::sync::Arc;

use super::grid::{apply_stencil_x, transpose_map, GridState};
use super::{
    is_divergence, run_guarded, steps_for, ExperimentConfig, ResultRow, REFERENCE_REFINEMENT,
};
use crate::error::Result;
use crate::flows::{thue_morse, Flow, InvolutiveStateMap, State};

/// The building blocks of the alternating-directions experiment for
/// `u_t = u_x + u_y + c u²`.
///
/// The vector field is split as `F = F_x + F_y` with
/// `F_x(u) = D_x u + ½ c u²`, and `F_y = T F_x T` for the grid transpose
/// `T`. The base flows only advance the `x` part; the `y` part enters
/// through conjugation by `T`.
#[derive(Debug, Clone)]
pub struct AltdirFlows {
    pub u0: GridState,
    /// Forward Euler on `F_x`.
    pub euler_x: Flow,
    /// `H_x(h/2) ∘ T H_x(h) T ∘ H_x(h/2)` with `H_x` Heun's method on `F_x`.
    pub heun_strang: Flow,
    pub transpose: InvolutiveStateMap,
}

pub fn altdir_flows(cfg: &ExperimentConfig) -> AltdirFlows {
    let n = cfg.grid;
    let u0 = GridState::gaussian(n, cfg.half_width, 1.0);
    let delta = u0.spacing();
    let c = cfg.nonlinearity;
    let stencil = [-1.0 / (2.0 * delta), 0.0, 1.0 / (2.0 * delta)];
    let fx = Arc::new(move |y: &State| -> State {
        let u = nalgebra::DMatrix::from_column_slice(n, n, y.as_slice());
        let du = apply_stencil_x(&u, stencil) + u.map(|v| 0.5 * c * v * v);
        State::from_column_slice(du.as_slice())
    });

    let f = fx.clone();
    let euler_x = Flow::new("euler-x", 1, move |h, y| Ok(y + f(y) * h));

    let f = fx.clone();
    let heun = move |h: f64, y: &State| -> State {
        let k1 = f(y);
        let k2 = f(&(y + &k1 * h));
        y + (k1 + k2) * (h / 2.0)
    };
    let t = transpose_map(n);
    let tt = t.clone();
    let heun_strang = Flow::new("heun-strang", 2, move |h, y| {
        let a = heun(h / 2.0, y);
        let b = tt.apply(&heun(h, &tt.apply(&a)));
        Ok(heun(h / 2.0, &b))
    });

    AltdirFlows {
        u0,
        euler_x,
        heun_strang,
        transpose: t,
    }
}

/// Thue–Morse levels `0..=cfg.levels` of two base schemes:
///
/// - `euler`: forward Euler at the fixed step `cfg.h` for
///   `cfg.fixed_steps` steps;
/// - `heun`: the Heun–Strang scheme on the ladder `cfg.hmax · 2^{−i}` up
///   to `cfg.t_end`.
///
/// Symmetry errors are `max |u − uᵀ|` at the end (a multiple of `2^k`
/// steps); global errors are against level 0 of the same base scheme at
/// `h_min / 64`.
pub fn run_altdir_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let flows = altdir_flows(cfg);
    let y0 = flows.u0.to_state();
    let t = &flows.transpose;
    let mut rows = Vec::new();

    if let Some(h) = cfg.h {
        let n = cfg.fixed_steps;
        let fine = h / REFERENCE_REFINEMENT as f64;
        let reference = run_guarded(&flows.euler_x, fine, &y0, n * REFERENCE_REFINEMENT)?;
        for k in 0..=cfg.levels {
            let scheme = thue_morse(&flows.euler_x, t, k, false);
            rows.push(measure(
                &scheme, "euler", k, h, n, &y0, &reference, &flows.u0,
            )?);
        }
    }

    let ladder: Vec<f64> = (0..cfg.rungs)
        .map(|i| cfg.hmax / f64::from(1u32 << i))
        .collect();
    let fine = ladder[ladder.len() - 1] / REFERENCE_REFINEMENT as f64;
    let n_ref = steps_for(cfg.t_end, fine, 1)?;
    let reference = run_guarded(&flows.heun_strang, fine, &y0, n_ref)?;
    for k in 0..=cfg.levels {
        let scheme = thue_morse(&flows.heun_strang, t, k, false);
        for &h in &ladder {
            let n = steps_for(cfg.t_end, h, 1 << k)?;
            rows.push(measure(
                &scheme, "heun", k, h, n, &y0, &reference, &flows.u0,
            )?);
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn measure(
    scheme: &Flow,
    name: &str,
    level: u32,
    h: f64,
    n_steps: usize,
    y0: &State,
    reference: &State,
    grid: &GridState,
) -> Result<ResultRow> {
    if n_steps % scheme.period() != 0 {
        return Err(crate::error::Error::PeriodMismatch {
            n_steps,
            period: scheme.period(),
        });
    }
    match run_guarded(scheme, h, y0, n_steps / scheme.period()) {
        Ok(y) => {
            let global = (&y - reference).amax();
            let sym = grid.with_state(&y).transpose_defect();
            Ok(ResultRow::ok(name, level, h, global, sym))
        }
        Err(e) if is_divergence(&e) => {
            log::warn!("{name} level {level} diverged at h = {h}: {e}");
            Ok(ResultRow::diverged(name, level, h))
        }
        Err(e) => Err(e),
    }
}
