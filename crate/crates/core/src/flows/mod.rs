//! One-step flows, their conjugation by involutions and the composition
//! schemes built on top: the Scovel projection, Thue–Morse symmetrization,
//! Yoshida's triple jump and the positive-step self-adjoint symmetrization.
//!
//! Step parameters are signed. A flow's `period` is the number of base-step
//! lengths one call advances (a Thue–Morse level-`k` macro-step covers `2^k`
//! base steps); [`symmetry_defect`] counts base steps and refuses to sample
//! in the middle of a macro-step.

mod compose;
mod order;
pub mod problems;

pub use compose::{
    scovel, symmetrize_coefficients, symmetrize_selfadjoint, thue_morse, thue_morse_pattern,
    yoshida, yoshida_coefficients,
};
pub use order::{estimate_order, OrderEstimate, ORDER_FLOOR};

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type State = DVector<f64>;

/// `(h, y) ↦ y'`.
pub type StepFn = Arc<dyn Fn(f64, &State) -> Result<State> + Send + Sync>;

/// How a flow is inverted.
#[derive(Clone)]
pub enum Inversion {
    /// `(h, y₁) ↦ y₀` with `φ_h(y₀) = y₁`.
    AnalyticInverse(StepFn),
    /// The adjoint `φ*_h = φ_{−h}⁻¹`; the inverse is `φ_h⁻¹ = φ*_{−h}`.
    AnalyticAdjoint(StepFn),
    /// Newton's method with a finite-difference Jacobian.
    NewtonInvert { tol: f64, max_iter: usize },
}

impl fmt::Debug for Inversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inversion::AnalyticInverse(_) => f.write_str("AnalyticInverse"),
            Inversion::AnalyticAdjoint(_) => f.write_str("AnalyticAdjoint"),
            Inversion::NewtonInvert { tol, max_iter } => f
                .debug_struct("NewtonInvert")
                .field("tol", tol)
                .field("max_iter", max_iter)
                .finish(),
        }
    }
}

impl Default for Inversion {
    fn default() -> Self {
        Inversion::NewtonInvert {
            tol: 1e-12,
            max_iter: 50,
        }
    }
}

/// A one-step numerical map `φ_h` with a declared classical order.
#[derive(Clone)]
pub struct Flow {
    name: String,
    stepper: StepFn,
    order: u32,
    inversion: Inversion,
    period: usize,
    base_evals: usize,
    word: Option<String>,
}

impl fmt::Debug for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Flow")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("inversion", &self.inversion)
            .field("period", &self.period)
            .field("base_evals", &self.base_evals)
            .finish()
    }
}

impl Flow {
    /// A base flow: one stepper evaluation per step, inverted by Newton
    /// unless an analytic inverse or adjoint is attached.
    pub fn new<F>(name: impl Into<String>, order: u32, stepper: F) -> Self
    where
        F: Fn(f64, &State) -> Result<State> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            stepper: Arc::new(stepper),
            order,
            inversion: Inversion::default(),
            period: 1,
            base_evals: 1,
            word: Some("0".into()),
        }
    }

    /// Linear flow `y ↦ M(h) y`.
    pub fn linear<F>(name: impl Into<String>, order: u32, matrix: F) -> Self
    where
        F: Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    {
        let m = Arc::new(matrix);
        let inv = m.clone();
        Self::new(name, order, move |h, y| Ok(m(h) * y))
            .with_inverse(move |h, y| inv(h).lu().solve(y).ok_or(Error::Singular))
    }

    pub fn with_inverse<F>(mut self, inverse: F) -> Self
    where
        F: Fn(f64, &State) -> Result<State> + Send + Sync + 'static,
    {
        self.inversion = Inversion::AnalyticInverse(Arc::new(inverse));
        self
    }

    pub fn with_adjoint<F>(mut self, adjoint: F) -> Self
    where
        F: Fn(f64, &State) -> Result<State> + Send + Sync + 'static,
    {
        self.inversion = Inversion::AnalyticAdjoint(Arc::new(adjoint));
        self
    }

    pub fn with_newton(mut self, tol: f64, max_iter: usize) -> Self {
        self.inversion = Inversion::NewtonInvert { tol, max_iter };
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared_order(&self) -> u32 {
        self.order
    }

    pub fn inversion(&self) -> &Inversion {
        &self.inversion
    }

    /// Base-step lengths advanced by one call.
    pub fn period(&self) -> usize {
        self.period
    }

    /// Base stepper evaluations per call.
    pub fn base_evals(&self) -> usize {
        self.base_evals
    }

    /// The composition word in product notation (`0` = base flow, `1` = its
    /// conjugate), when the flow is a pure Thue–Morse-type composition.
    pub fn word(&self) -> Option<&str> {
        self.word.as_deref()
    }

    pub fn step(&self, h: f64, y: &State) -> Result<State> {
        (self.stepper)(h, y)
    }

    /// Applies the flow `n` times.
    pub fn run(&self, h: f64, y: &State, n: usize) -> Result<State> {
        let mut y = y.clone();
        for _ in 0..n {
            y = self.step(h, &y)?;
        }
        Ok(y)
    }

    /// `y₀` with `φ_h(y₀) = y₁`.
    pub fn invert(&self, h: f64, y1: &State) -> Result<State> {
        invert_step(self, h, y1)
    }

    /// `φ_h⁻¹` as a flow.
    pub fn inverse(&self) -> Flow {
        let fwd = self.clone();
        let back = self.clone();
        Flow {
            name: format!("inv({})", self.name),
            stepper: Arc::new(move |h, y| invert_step(&back, h, y)),
            order: self.order,
            inversion: Inversion::AnalyticInverse(Arc::new(move |h, y| fwd.step(h, y))),
            period: self.period,
            base_evals: self.base_evals,
            word: None,
        }
    }

    /// Composition of `(flow, c)` parts applied left to right, each at step
    /// `c·h`. The inverse undoes the parts in reverse order.
    pub fn compose(name: impl Into<String>, order: u32, parts: Vec<(Flow, f64)>) -> Flow {
        let fwd = Arc::new(parts);
        let back = fwd.clone();
        let period = fwd.iter().map(|(f, _)| f.period).sum::<usize>().max(1);
        let base_evals = fwd.iter().map(|(f, _)| f.base_evals).sum();
        let word = fwd
            .iter()
            .rev()
            .map(|(f, _)| f.word.clone())
            .collect::<Option<Vec<String>>>()
            .map(|w| w.concat());
        Flow {
            name: name.into(),
            stepper: Arc::new(move |h, y| {
                let mut y = y.clone();
                for (f, c) in fwd.iter() {
                    y = f.step(c * h, &y)?;
                }
                Ok(y)
            }),
            order,
            inversion: Inversion::AnalyticInverse(Arc::new(move |h, y| {
                let mut y = y.clone();
                for (f, c) in back.iter().rev() {
                    y = f.invert(c * h, &y)?;
                }
                Ok(y)
            })),
            period,
            base_evals,
            word,
        }
    }
}

/// An involution of state space (`T∘T = id`).
#[derive(Clone)]
pub struct InvolutiveStateMap {
    name: String,
    apply: Arc<dyn Fn(&State) -> State + Send + Sync>,
}

impl fmt::Debug for InvolutiveStateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InvolutiveStateMap({})", self.name)
    }
}

impl InvolutiveStateMap {
    pub fn new<F>(name: impl Into<String>, apply: F) -> Self
    where
        F: Fn(&State) -> State + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            apply: Arc::new(apply),
        }
    }

    /// `y ↦ S y` for an involutive matrix `S`.
    pub fn linear(name: impl Into<String>, s: DMatrix<f64>) -> Self {
        Self::new(name, move |y| &s * y)
    }

    pub fn identity() -> Self {
        Self::new("id", |y| y.clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, y: &State) -> State {
        (self.apply)(y)
    }

    /// `max ‖T(T(y)) − y‖∞` over the samples.
    pub fn involution_defect(&self, samples: &[State]) -> f64 {
        samples
            .iter()
            .map(|y| (self.apply(&self.apply(y)) - y).amax())
            .fold(0.0, f64::max)
    }
}

/// An involutive automorphism acting on flows.
#[derive(Debug, Clone)]
pub enum Conjugation {
    /// `σ(φ) = T∘φ∘T`.
    State(InvolutiveStateMap),
    /// `σ(φ)_h = φ_{−h}`; then `σ(φ⁻¹)_h = φ_{−h}⁻¹` is the adjoint method,
    /// and the flows with `σ(φ) = φ⁻¹` are the self-adjoint ones.
    TimeReversal,
}

/// `σ(φ)` for the given conjugation. Declared order is preserved.
pub fn sigma(flow: &Flow, conj: &Conjugation) -> Flow {
    match conj {
        Conjugation::State(t) => conjugate_flow(flow, t),
        Conjugation::TimeReversal => {
            let fwd = flow.clone();
            let back = flow.clone();
            Flow {
                name: format!("rev({})", flow.name),
                stepper: Arc::new(move |h, y| fwd.step(-h, y)),
                order: flow.order,
                inversion: Inversion::AnalyticInverse(Arc::new(move |h, y| back.invert(-h, y))),
                period: flow.period,
                base_evals: flow.base_evals,
                word: None,
            }
        }
    }
}

/// `T∘φ∘T`.
pub fn conjugate_flow(flow: &Flow, t: &InvolutiveStateMap) -> Flow {
    let (fwd, back) = (flow.clone(), flow.clone());
    let (t1, t2) = (t.clone(), t.clone());
    Flow {
        name: format!("{}({})", t.name, flow.name),
        stepper: Arc::new(move |h, y| Ok(t1.apply(&fwd.step(h, &t1.apply(y))?))),
        order: flow.order,
        inversion: Inversion::AnalyticInverse(Arc::new(move |h, y| {
            Ok(t2.apply(&back.invert(h, &t2.apply(y))?))
        })),
        period: flow.period,
        base_evals: flow.base_evals,
        word: flow.word.as_ref().map(|w| {
            w.chars()
                .map(|c| match c {
                    '0' => '1',
                    '1' => '0',
                    other => other,
                })
                .collect()
        }),
    }
}

/// `y₀` with `φ_h(y₀) = y₁`, according to the flow's inversion strategy.
pub fn invert_step(flow: &Flow, h: f64, y1: &State) -> Result<State> {
    match &flow.inversion {
        Inversion::AnalyticInverse(inv) => inv(h, y1),
        Inversion::AnalyticAdjoint(adj) => adj(-h, y1),
        Inversion::NewtonInvert { tol, max_iter } => newton_invert(flow, h, y1, *tol, *max_iter),
    }
}

/// Damped Newton iteration on `φ_h(y) − y₁ = 0` with a forward-difference
/// Jacobian, started from the reflected guess `2y₁ − φ_h(y₁)`. Once the
/// residual is below `tol·(1 + ‖y₁‖∞)` a final undamped step is taken.
fn newton_invert(flow: &Flow, h: f64, y1: &State, tol: f64, max_iter: usize) -> Result<State> {
    let n = y1.len();
    let g = |y: &State| -> Result<State> { Ok(flow.step(h, y)? - y1) };
    let mut y = y1 * 2.0 - flow.step(h, y1)?;
    let mut r = g(&y)?;
    let scale = 1.0 + y1.amax();
    for _ in 0..max_iter {
        let converged = r.amax() <= tol * scale;
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let eps = f64::EPSILON.sqrt() * y[j].abs().max(1.0);
            let mut yp = y.clone();
            yp[j] += eps;
            let col = (g(&yp)? - &r) / eps;
            jac.set_column(j, &col);
        }
        let dy = jac.lu().solve(&r).ok_or(Error::Singular)?;
        if converged {
            // one polishing step takes the result from `tol` to rounding level
            let cand = &y - &dy;
            let rc = g(&cand)?;
            return Ok(if rc.amax() <= r.amax() { cand } else { y });
        }
        let mut lambda = 1.0;
        loop {
            let cand = &y - &dy * lambda;
            let rc = g(&cand)?;
            if rc.amax() < r.amax() || lambda < 1e-4 {
                y = cand;
                r = rc;
                break;
            }
            lambda *= 0.5;
        }
    }
    if r.amax() <= tol * scale {
        Ok(y)
    } else {
        Err(Error::NoConvergence {
            what: "newton_invert",
            iterations: max_iter,
            residual: r.amax(),
        })
    }
}

/// Which defect [`symmetry_defect`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectMode {
    /// `‖T(Φ(T y₀)) − Φ(y₀)‖∞` — `T` should commute with `Φ`.
    Symmetry,
    /// `‖T(Φ(T(Φ(y₀)))) − y₀‖∞` — `T` should reverse `Φ`.
    Reversing,
}

/// Symmetry or reversing-symmetry defect after `n_steps` base steps
/// (`n_steps / period` applications of `flow`).
pub fn symmetry_defect(
    flow: &Flow,
    t: &InvolutiveStateMap,
    y0: &State,
    h: f64,
    n_steps: usize,
    mode: DefectMode,
) -> Result<f64> {
    if n_steps % flow.period != 0 {
        return Err(Error::PeriodMismatch {
            n_steps,
            period: flow.period,
        });
    }
    let macros = n_steps / flow.period;
    let phi = flow.run(h, y0, macros)?;
    Ok(match mode {
        DefectMode::Symmetry => {
            let conj = t.apply(&flow.run(h, &t.apply(y0), macros)?);
            (conj - phi).amax()
        }
        DefectMode::Reversing => {
            let back = t.apply(&flow.run(h, &t.apply(&phi), macros)?);
            (back - y0).amax()
        }
    })
}

/// `‖φ_{−h}(φ_h(y)) − y‖∞`, which vanishes for self-adjoint methods.
pub fn selfadjoint_defect(flow: &Flow, h: f64, y: &State) -> Result<f64> {
    Ok((flow.step(-h, &flow.step(h, y)?)? - y).amax())
}

#[cfg(test)]
mod tests;
