//! Polar coordinates for `ẋ = X(t)·x`: writing `x(t) = exp(P(t)) exp(K(t))`
//! with `P ∈ p`, `K ∈ k` turns the group ODE into
//!
//! ```text
//! Ṗ = Π⁻X − [P, Π⁺X] + Σ_{j=1}^{J} 2^{2j} c_{2j} ad_P^{2j} Π⁻X
//! K̇ = dexp⁻¹_K( Π⁺X − 2 Σ_{j=1}^{J} (2^{2j} − 1) c_{2j} ad_P^{2j−1} Π⁻X )
//! ```
//!
//! with `c_{2j} = B_{2j}/(2j)!` and `Π∓X` the `p`/`k` components of `X`. The
//! coupled system is integrated with the classical fourth-order Runge–Kutta
//! method.

use crate::error::{Error, Result};
use crate::involutions::Involution;
use crate::matcore::{commutator, ensure_square, BernoulliTable, Mat};
use crate::series::{dexpinv_with, TruncationOrder};

/// Truncation order of `dexp⁻¹_K` inside the `K̇` equation.
const DEXPINV_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PolarCoordsState {
    pub t: f64,
    pub p: Mat,
    pub k: Mat,
}

struct PolarRhs<'a> {
    inv: &'a Involution,
    table: BernoulliTable,
    /// `2^{2j} c_{2j}` for `j = 1..=J`.
    p_coeffs: Vec<f64>,
    /// `2 (2^{2j} − 1) c_{2j}` for `j = 1..=J`.
    k_coeffs: Vec<f64>,
}

impl<'a> PolarRhs<'a> {
    fn new(inv: &'a Involution, big_j: usize) -> Self {
        let table = BernoulliTable::default();
        let mut p_coeffs = Vec::with_capacity(big_j);
        let mut k_coeffs = Vec::with_capacity(big_j);
        for j in 1..=big_j {
            let c = table.over_factorial(2 * j);
            let four_j = 4f64.powi(j as i32);
            p_coeffs.push(four_j * c);
            k_coeffs.push(2.0 * (four_j - 1.0) * c);
        }
        Self {
            inv,
            table,
            p_coeffs,
            k_coeffs,
        }
    }

    fn eval(&self, x: &Mat, p: &Mat, k: &Mat) -> Result<(Mat, Mat)> {
        let xm = self.inv.p_part(x)?;
        let xp = self.inv.k_part(x)?;
        let mut pdot = &xm - commutator(p, &xp);
        let mut kin = xp;
        let mut ad = xm;
        for (pc, kc) in self.p_coeffs.iter().zip(&self.k_coeffs) {
            ad = commutator(p, &ad); // odd power 2j − 1
            kin -= &ad * *kc;
            ad = commutator(p, &ad); // even power 2j
            pdot += &ad * *pc;
        }
        let kdot = dexpinv_with(&self.table, k, &kin, DEXPINV_ORDER);
        Ok((pdot, kdot))
    }
}

/// Integrates the polar-coordinate equations from `P(0) = K(0) = 0` up to
/// `t_end` with fixed step `≈ h` (adjusted so that an integer number of
/// steps lands on `t_end`); `J = ⌊trunc/2⌋`. Returns every step, starting
/// with the initial state.
pub fn polar_coords_integrate<F>(
    xfun: F,
    inv: &Involution,
    t_end: f64,
    h: f64,
    trunc: TruncationOrder,
) -> Result<Vec<PolarCoordsState>>
where
    F: Fn(f64) -> Mat,
{
    let n = ensure_square(&xfun(0.0))?;
    let zero = Mat::zeros(n, n);
    polar_coords_integrate_with(xfun, inv, zero.clone(), zero, t_end, h, trunc)
}

/// As [`polar_coords_integrate`] but starting from given `(P₀, K₀)`.
pub fn polar_coords_integrate_with<F>(
    xfun: F,
    inv: &Involution,
    p0: Mat,
    k0: Mat,
    t_end: f64,
    h: f64,
    trunc: TruncationOrder,
) -> Result<Vec<PolarCoordsState>>
where
    F: Fn(f64) -> Mat,
{
    if !(h > 0.0 && h.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "need h > 0 and t_end >= 0, got h = {h}, t_end = {t_end}"
        )));
    }
    let steps = ((t_end / h) - 1e-9).ceil().max(0.0) as usize;
    let dt = if steps == 0 {
        0.0
    } else {
        t_end / steps as f64
    };
    let rhs = PolarRhs::new(inv, (trunc.get() / 2) as usize);

    let mut out = Vec::with_capacity(steps + 1);
    let (mut p, mut k) = (p0, k0);
    out.push(PolarCoordsState {
        t: 0.0,
        p: p.clone(),
        k: k.clone(),
    });
    for i in 0..steps {
        let t = i as f64 * dt;
        let x0 = xfun(t);
        let xh = xfun(t + 0.5 * dt);
        let x1 = xfun(t + dt);
        let (p1, k1) = rhs.eval(&x0, &p, &k)?;
        let (p2, k2) = rhs.eval(&xh, &(&p + &p1 * (0.5 * dt)), &(&k + &k1 * (0.5 * dt)))?;
        let (p3, k3) = rhs.eval(&xh, &(&p + &p2 * (0.5 * dt)), &(&k + &k2 * (0.5 * dt)))?;
        let (p4, k4) = rhs.eval(&x1, &(&p + &p3 * dt), &(&k + &k3 * dt))?;
        p += (p1 + p2 * 2.0 + p3 * 2.0 + p4) * (dt / 6.0);
        k += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        if !p.iter().chain(k.iter()).all(|v| v.is_finite()) {
            return Err(Error::Diverged);
        }
        out.push(PolarCoordsState {
            t: (i + 1) as f64 * dt,
            p: p.clone(),
            k: k.clone(),
        });
    }
    Ok(out)
}
