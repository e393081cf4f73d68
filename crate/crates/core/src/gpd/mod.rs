//! Generalized polar decomposition `x = p·k` (with `σ(p) = p⁻¹`, `σ(k) = k`),
//! the classical polar decomposition, analytic functions of 2-cyclic
//! matrices and integration of `ẋ = X(t, x)·x` in polar coordinates
//! `x(t) = exp(P(t)) exp(K(t))`.

mod coords;
mod cyclic;
mod polar;

pub use coords::{polar_coords_integrate, polar_coords_integrate_with, PolarCoordsState};
pub use cyclic::{analytic_fn_2cyclic, psi_matrix, psi_scalar, AnalyticFn, PsiBranch};
pub use polar::{classical_polar, generalized_polar, PolarFactors};
