use log::warn;

use crate::error::{Error, Result};
use crate::involutions::Involution;
use crate::matcore::{ensure_finite, ensure_square, expm, fro, logm, Mat};
use crate::series::{gpd_series, TruncationOrder};

/// Factors of `x = p_factor · k_factor`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors {
    /// Element of `G_σ = {p : σ(p) = p⁻¹}`.
    pub p_factor: Mat,
    /// Element of the fixed-point group `G^σ = {k : σ(k) = k}`.
    pub k_factor: Mat,
    /// `‖p_factor·k_factor − x‖_F`.
    pub residual: f64,
}

/// Above this norm of `log x` the truncated series is no longer a useful
/// approximation.
const SERIES_NORM_WARNING: f64 = 0.5;

/// Generalized polar decomposition via `X = log x`, the `p ⊕ k` splitting
/// of `X`, the truncated commutator series for `(S, Q)` and
/// `p = exp(S)`, `k = exp(Q)`.
///
/// The residual behaves like `O(‖log x‖^{order+1})`.
pub fn generalized_polar(
    x: &Mat,
    inv: &Involution,
    order: TruncationOrder,
) -> Result<PolarFactors> {
    let big_x = logm(x)?;
    let norm = fro(&big_x);
    if norm > SERIES_NORM_WARNING {
        warn!(
            "generalized_polar: |log x|_F = {norm:.3} exceeds {SERIES_NORM_WARNING}; \
             the truncated series may be inaccurate"
        );
    }
    let sp = inv.split(&big_x)?;
    let (s, q) = gpd_series(&sp.p, &sp.k, order)?;
    let p_factor = expm(&s)?;
    let k_factor = expm(&q)?;
    let residual = fro(&(&p_factor * &k_factor - x));
    Ok(PolarFactors {
        p_factor,
        k_factor,
        residual,
    })
}

/// Classical polar decomposition `x = s·q` by the Newton iteration
/// `y ← ½(y + y⁻ᵀ)` started from `y = x`.
///
/// Stops when the relative change `‖y_{k+1} − y_k‖_F / ‖y_{k+1}‖_F` drops to
/// `tol`, or — once the change is below `√tol` — when it stops decreasing
/// (rounding floor). Returns `p_factor = s = x·qᵀ` and `k_factor = q`.
pub fn classical_polar(x: &Mat, tol: f64, max_iter: usize) -> Result<PolarFactors> {
    ensure_square(x)?;
    ensure_finite(x)?;
    let mut y = x.clone();
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let yit = y.clone().try_inverse().ok_or(Error::Singular)?.transpose();
        let next = (&y + yit) * 0.5;
        let change = fro(&(&next - &y)) / fro(&next);
        y = next;
        if change <= tol || (change < tol.sqrt() && change >= last) {
            let s = x * y.transpose();
            let residual = fro(&(&s * &y - x));
            return Ok(PolarFactors {
                p_factor: s,
                k_factor: y,
                residual,
            });
        }
        last = change;
    }
    Err(Error::NoConvergence {
        what: "classical_polar",
        iterations: max_iter,
        residual: last,
    })
}
