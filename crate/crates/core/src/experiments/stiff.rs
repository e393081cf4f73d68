use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::grid::{laplacian_1d, transpose_map, GridState};
use super::{
    is_divergence, run_guarded, steps_for, ExperimentConfig, ResultRow, REFERENCE_REFINEMENT,
};
use crate::error::{Error, Result};
use crate::flows::{symmetrize_selfadjoint, yoshida, Flow, State};

/// Newton tolerance of the backward-Euler substeps (relative to `1 + ‖v‖∞`).
pub const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;

/// `u_t = ∇²u + c f(u)`, `f(u) = −u(u − 1)²`, on a periodic square, split
/// as `F₁ = D_xx + ½cf` and `F₂ = D_yy + ½cf = T F₁ T`.
#[derive(Debug, Clone)]
pub struct StiffProblem {
    pub u0: GridState,
    pub d2: DMatrix<f64>,
    pub coeff: f64,
}

impl StiffProblem {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        let u0 = GridState::gaussian(cfg.grid, cfg.half_width, 9.0);
        let d2 = laplacian_1d(cfg.grid, u0.spacing());
        Self {
            u0,
            d2,
            coeff: cfg.nonlinearity,
        }
    }

    pub fn n(&self) -> usize {
        self.u0.n
    }

    fn f(&self, u: f64) -> f64 {
        -self.coeff * u * (u - 1.0).powi(2)
    }

    fn df(&self, u: f64) -> f64 {
        -self.coeff * (u - 1.0) * (3.0 * u - 1.0)
    }

    /// `F₁(u) = D_xx u + ½ c f(u)`.
    pub fn f1(&self, u: &DMatrix<f64>) -> DMatrix<f64> {
        &self.d2 * u + u.map(|v| 0.5 * self.f(v))
    }

    /// Forward Euler on `F₁`.
    pub fn fe_x(&self, u: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
        u + self.f1(u) * t
    }

    /// Backward Euler on `F₁`: solves `v − t F₁(v) = w` column by column
    /// with Newton's method started at `w`.
    pub fn be_x(&self, w: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
        let n = self.n();
        let base = DMatrix::identity(n, n) - &self.d2 * t;
        let mut out = w.clone();
        for j in 0..w.ncols() {
            let wj = w.column(j).into_owned();
            let mut v = wj.clone();
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITER {
                let r: DVector<f64> = &v - (&self.d2 * &v + v.map(|x| 0.5 * self.f(x))) * t - &wj;
                if r.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Diverged);
                }
                let mut jac = base.clone();
                for i in 0..n {
                    jac[(i, i)] -= 0.5 * t * self.df(v[i]);
                }
                let dv = jac.lu().solve(&r).ok_or(Error::Singular)?;
                v -= &dv;
                if dv.amax() <= NEWTON_TOL * (1.0 + v.amax()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NoConvergence {
                    what: "backward Euler substep",
                    iterations: NEWTON_MAX_ITER,
                    residual: f64::NAN,
                });
            }
            out.set_column(j, &v);
        }
        Ok(out)
    }

    /// One step of the base method
    /// `BE_{h/2,F₁} ∘ BE_{h/2,F₂} ∘ FE_{h/2,F₂} ∘ FE_{h/2,F₁}`.
    pub fn base_step(&self, u: &DMatrix<f64>, h: f64) -> Result<DMatrix<f64>> {
        let t = h / 2.0;
        let a = self.fe_x(u, t);
        let b = self.fe_x(&a.transpose(), t).transpose();
        let c = self.be_x(&b.transpose(), t)?.transpose();
        self.be_x(&c, t)
    }
}

/// The base method as a [`Flow`] on flattened fields. It is self-adjoint,
/// so its inverse is the step with negated `h`.
pub fn stiff_base_flow(problem: &StiffProblem) -> Flow {
    let p = Arc::new(problem.clone());
    let n = problem.n();
    let step = move |h: f64, y: &State| -> Result<State> {
        let u = DMatrix::from_column_slice(n, n, y.as_slice());
        let v = p.base_step(&u, h)?;
        Ok(DVector::from_column_slice(v.as_slice()))
    };
    let step = Arc::new(step);
    let adj = step.clone();
    Flow::new("stiff-base", 2, move |h, y| step(h, y)).with_adjoint(move |h, y| adj(h, y))
}

/// Whether `flow` run with step `h` for `round(t_end/h)` steps stays below
/// the divergence threshold.
fn survives(flow: &Flow, y0: &State, h: f64, t_end: f64) -> bool {
    let n = ((t_end / h).round() as usize).max(1);
    run_guarded(flow, h, y0, n).is_ok()
}

/// Bisection for the largest stable step `h₀ ∈ [lo, hi]` of `flow`.
pub fn find_stable_step(flow: &Flow, y0: &State, t_end: f64, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    if survives(flow, y0, hi, t_end) {
        return hi;
    }
    for _ in 0..25 {
        let mid = 0.5 * (lo + hi);
        if survives(flow, y0, mid, t_end) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Base method, Yoshida's triple jump and the positive-step self-adjoint
/// symmetrization (both with `p = 1`) on the ladder `H · 2^{−i}`, where
/// `H = t_end / ⌈t_end / 3h₀⌉` is `3h₀` rounded down to divide `t_end`.
pub fn run_stiff_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let problem = StiffProblem::new(cfg);
    let base = stiff_base_flow(&problem);
    let y0 = problem.u0.to_state();
    let top = match cfg.h {
        Some(h) => h,
        None => {
            let h0 = find_stable_step(&base, &y0, cfg.t_end, 0.01 * cfg.t_end, cfg.t_end);
            log::info!("largest stable base step h0 = {h0}");
            cfg.t_end / (cfg.t_end / (3.0 * h0)).ceil()
        }
    };
    let ladder: Vec<f64> = (0..cfg.rungs).map(|i| top / f64::from(1u32 << i)).collect();
    let fine = ladder[ladder.len() - 1] / REFERENCE_REFINEMENT as f64;
    let reference = run_guarded(&base, fine, &y0, steps_for(cfg.t_end, fine, 1)?)?;

    let t = transpose_map(problem.n());
    let schemes = [
        ("base", 0, base.clone()),
        ("yoshida", 1, yoshida(&base, 1)),
        ("selfadjoint", 1, symmetrize_selfadjoint(&base, &t, 1, 1)),
    ];
    let mut rows = Vec::new();
    for (name, level, scheme) in &schemes {
        for &h in &ladder {
            let n = steps_for(cfg.t_end, h, 1)?;
            let row = match run_guarded(scheme, h, &y0, n) {
                Ok(y) => ResultRow::ok(
                    name,
                    *level,
                    h,
                    (&y - &reference).amax(),
                    problem.u0.with_state(&y).transpose_defect(),
                ),
                Err(e) if is_divergence(&e) => {
                    log::warn!("{name} diverged at h = {h}: {e}");
                    ResultRow::diverged(name, *level, h)
                }
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}
