//! Analytic functions of 2-cyclic matrices.
//!
//! A matrix `P` is 2-cyclic with respect to an involutive `S` when
//! `SPS = −P`. For an analytic `ψ`,
//!
//! ```text
//! ψ(P) = ψ(0)I + Ψ₁P + PΨ₁ + PΨ₂P + Ψ₂Θ,     Θ = P²Π⁻,
//! ψ₁(s) = (ψ(√s) − ψ(−√s)) / (2√s),
//! ψ₂(s) = (ψ(√s) + ψ(−√s) − 2ψ(0)) / (2s),
//! ```
//!
//! where `Ψᵢ` is `ψᵢ` evaluated on the restriction of `Θ` to the range of
//! `Π⁻` and extended by zero on the range of `Π⁺`. (Evaluating `ψᵢ(Θ)` on
//! the whole space would put `ψᵢ(0)` on the `Π⁺` block, which double counts:
//! already `ψ(s) = s` would come out as `2P`.)

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::involutions::projectors;
use crate::matcore::{ensure_same_shape, ensure_square, fro, Mat};

/// Scalar functions supported by [`analytic_fn_2cyclic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticFn {
    Exp,
    Cos,
    Sin,
    /// `ψ(s) = (1 − s/2)⁻¹`, the resolvent behind the Cayley transform.
    Resolvent,
    Identity,
}

impl AnalyticFn {
    pub const ALL: [AnalyticFn; 5] = [
        AnalyticFn::Exp,
        AnalyticFn::Cos,
        AnalyticFn::Sin,
        AnalyticFn::Resolvent,
        AnalyticFn::Identity,
    ];

    /// `ψ(0)`.
    pub fn at_zero(self) -> f64 {
        match self {
            AnalyticFn::Exp | AnalyticFn::Cos | AnalyticFn::Resolvent => 1.0,
            AnalyticFn::Sin | AnalyticFn::Identity => 0.0,
        }
    }

    /// Scalar evaluation `ψ(s)`.
    pub fn eval(self, s: f64) -> f64 {
        match self {
            AnalyticFn::Exp => s.exp(),
            AnalyticFn::Cos => s.cos(),
            AnalyticFn::Sin => s.sin(),
            AnalyticFn::Resolvent => 1.0 / (1.0 - 0.5 * s),
            AnalyticFn::Identity => s,
        }
    }
}

impl fmt::Display for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnalyticFn::Exp => "exp",
            AnalyticFn::Cos => "cos",
            AnalyticFn::Sin => "sin",
            AnalyticFn::Resolvent => "resolvent",
            AnalyticFn::Identity => "identity",
        })
    }
}

impl FromStr for AnalyticFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AnalyticFn::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown analytic function {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PsiBranch {
    Psi1,
    Psi2,
}

/// Below this `|s|` the removable singularity is handled by Taylor series.
const TAYLOR_SWITCH: f64 = 1e-6;

/// Taylor coefficient `a_k` of `ψᵢ(s) = Σ a_k s^k`, or `None` when the
/// branch has no power series (the resolvent, handled in closed form).
fn taylor_coefficient(f: AnalyticFn, branch: PsiBranch, k: usize) -> Option<f64> {
    let fact = |n: usize| (1..=n).fold(1.0, |acc, i| acc * i as f64);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    match (f, branch) {
        (AnalyticFn::Exp, PsiBranch::Psi1) => Some(1.0 / fact(2 * k + 1)),
        (AnalyticFn::Exp, PsiBranch::Psi2) => Some(1.0 / fact(2 * k + 2)),
        (AnalyticFn::Cos, PsiBranch::Psi1) => Some(0.0),
        (AnalyticFn::Cos, PsiBranch::Psi2) => Some(-sign / fact(2 * k + 2)),
        (AnalyticFn::Sin, PsiBranch::Psi1) => Some(sign / fact(2 * k + 1)),
        (AnalyticFn::Sin, PsiBranch::Psi2) => Some(0.0),
        (AnalyticFn::Identity, PsiBranch::Psi1) => Some(if k == 0 { 1.0 } else { 0.0 }),
        (AnalyticFn::Identity, PsiBranch::Psi2) => Some(0.0),
        (AnalyticFn::Resolvent, _) => None,
    }
}

/// `ψ₁(s)` or `ψ₂(s)` for a scalar `s`.
///
/// Uses closed forms (trigonometric for one sign of `s`, hyperbolic for the
/// other) and switches to the Taylor expansion for `|s| < 1e−6`.
pub fn psi_scalar(f: AnalyticFn, branch: PsiBranch, s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::FunctionDomain(format!("non-finite argument {s}")));
    }
    if f == AnalyticFn::Resolvent {
        let d = 4.0 - s;
        if d.abs() <= 1e-14 * s.abs().max(1.0) {
            return Err(Error::FunctionDomain(format!(
                "resolvent pole: s = {s} hits the pole at 4"
            )));
        }
        return Ok(match branch {
            PsiBranch::Psi1 => 2.0 / d,
            PsiBranch::Psi2 => 1.0 / d,
        });
    }
    if s.abs() < TAYLOR_SWITCH {
        let a0 = taylor_coefficient(f, branch, 0).unwrap_or(0.0);
        let a1 = taylor_coefficient(f, branch, 1).unwrap_or(0.0);
        let a2 = taylor_coefficient(f, branch, 2).unwrap_or(0.0);
        return Ok(a0 + s * (a1 + s * a2));
    }
    let r = s.abs().sqrt();
    let pos = s > 0.0;
    Ok(match (f, branch) {
        (AnalyticFn::Exp, PsiBranch::Psi1) => {
            if pos {
                r.sinh() / r
            } else {
                r.sin() / r
            }
        }
        (AnalyticFn::Exp, PsiBranch::Psi2) => {
            if pos {
                (r.cosh() - 1.0) / s
            } else {
                (r.cos() - 1.0) / s
            }
        }
        (AnalyticFn::Cos, PsiBranch::Psi1) | (AnalyticFn::Sin, PsiBranch::Psi2) => 0.0,
        (AnalyticFn::Cos, PsiBranch::Psi2) => {
            if pos {
                (r.cos() - 1.0) / s
            } else {
                (r.cosh() - 1.0) / s
            }
        }
        (AnalyticFn::Sin, PsiBranch::Psi1) => {
            if pos {
                r.sin() / r
            } else {
                r.sinh() / r
            }
        }
        (AnalyticFn::Identity, PsiBranch::Psi1) => 1.0,
        (AnalyticFn::Identity, PsiBranch::Psi2) => 0.0,
        (AnalyticFn::Resolvent, _) => unreachable!("handled above"),
    })
}

/// `ψᵢ(θ)` for a square matrix `θ`: power series for the entire functions,
/// a linear solve for the resolvent.
pub fn psi_matrix(f: AnalyticFn, branch: PsiBranch, theta: &Mat) -> Result<Mat> {
    let m = ensure_square(theta)?;
    let id = Mat::identity(m, m);
    if f == AnalyticFn::Resolvent {
        let inv = (&id * 4.0 - theta).try_inverse().ok_or_else(|| {
            Error::FunctionDomain("Θ has the eigenvalue 4 (resolvent pole)".into())
        })?;
        if !inv.iter().all(|v| v.is_finite()) {
            return Err(Error::FunctionDomain(
                "Θ has the eigenvalue 4 (resolvent pole)".into(),
            ));
        }
        return Ok(match branch {
            PsiBranch::Psi1 => inv * 2.0,
            PsiBranch::Psi2 => inv,
        });
    }
    const MAX_TERMS: usize = 400;
    let mut power = id.clone();
    let mut sum = Mat::zeros(m, m);
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let a = taylor_coefficient(f, branch, k).expect("entire function");
        if k > 0 {
            power = &power * theta;
        }
        if a != 0.0 {
            let term = &power * a;
            let tn = fro(&term);
            sum += term;
            if tn <= 1e-17 * fro(&sum).max(1e-300) {
                quiet += 1;
                if quiet >= 2 {
                    return Ok(sum);
                }
            } else {
                quiet = 0;
            }
        } else if k > 2 && taylor_coefficient(f, branch, k + 1) == Some(0.0) {
            // identically zero tail
            return Ok(sum);
        }
        if !power.iter().all(|v| v.is_finite()) {
            break;
        }
    }
    Err(Error::NoConvergence {
        what: "psi series",
        iterations: MAX_TERMS,
        residual: fro(theta),
    })
}

/// Orthonormal basis `V` of the range of the projector `Π` (from the
/// eigenvectors of `ΠΠᵀ` with eigenvalue above ¼) and `W = VᵀΠ`.
fn minus_space_frame(pi: &Mat) -> Result<(Mat, Mat)> {
    let n = pi.nrows();
    let eig = (pi * pi.transpose()).symmetric_eigen();
    let cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.25).collect();
    let v = Mat::from_fn(n, cols.len(), |i, j| eig.eigenvectors[(i, cols[j])]);
    let w = v.transpose() * pi;
    let defect = fro(&(&v * &w - pi));
    if defect > 1e-10 * fro(pi).max(1.0) {
        return Err(Error::NoConvergence {
            what: "projector range basis",
            iterations: 1,
            residual: defect,
        });
    }
    Ok((v, w))
}

/// `ψ(P)` for a 2-cyclic `P` (`SPS = −P`) by the 2-cyclic decomposition.
///
/// The range of `Π⁻` is parametrized by `V` (orthonormal columns) and
/// `W = VᵀΠ⁻`, which satisfy `VW = Π⁻` and `WV = I_m`; the restricted
/// operator is `θ = W P² V`.
pub fn analytic_fn_2cyclic(p: &Mat, s: &Mat, f: AnalyticFn) -> Result<Mat> {
    let n = ensure_square(p)?;
    ensure_same_shape(p, s)?;
    let pp = projectors(s)?;
    let defect = fro(&(s * p * s + p));
    if defect > 1e-12 * fro(p).max(1.0) {
        return Err(Error::NotTwoCyclic { residual: defect });
    }
    let id = Mat::identity(n, n);
    let (v, w) = minus_space_frame(&pp.minus)?;
    let mut out = &id * f.at_zero();
    if v.ncols() == 0 {
        // S = I forces P = 0
        return Ok(out);
    }
    let p2 = p * p;
    let theta = &w * &p2 * &v;
    let big_theta = &p2 * &pp.minus;
    let psi1 = &v * psi_matrix(f, PsiBranch::Psi1, &theta)? * &w;
    let psi2 = &v * psi_matrix(f, PsiBranch::Psi2, &theta)? * &w;
    out += &psi1 * p + p * &psi1 + p * &psi2 * p + &psi2 * big_theta;
    Ok(out)
}
