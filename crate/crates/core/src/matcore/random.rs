//! Seeded random matrix generators used by tests, the verify suites and the
//! acceptance harness.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::Mat;

/// Matrix with i.i.d. standard normal entries.
pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Gaussian matrix rescaled to the given Frobenius norm.
pub fn gaussian_with_norm<R: Rng + ?Sized>(n: usize, norm: f64, rng: &mut R) -> Mat {
    let g = gaussian(n, n, rng);
    let f = g.norm();
    g * (norm / f)
}

/// Haar-like random orthogonal matrix (QR of a Gaussian with sign fix).
pub fn orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let qr = gaussian(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Random rotation (orthogonal with determinant +1).
pub fn rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let mut q = orthogonal(n, rng);
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Random symmetric positive definite matrix `QᵀDQ` with eigenvalues drawn
/// uniformly from `[lo, hi]`.
pub fn spd<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Mat {
    let q = orthogonal(n, rng);
    let d = DVector::from_fn(n, |_, _| rng.random_range(lo..=hi));
    q.transpose() * Mat::from_diagonal(&d) * q
}

/// Random matrix `U diag(σ) Vᵀ` whose singular values are spread
/// geometrically between `1/cond` and 1.
pub fn with_condition<R: Rng + ?Sized>(n: usize, cond: f64, rng: &mut R) -> Mat {
    let u = orthogonal(n, rng);
    let v = orthogonal(n, rng);
    let sigma = DVector::from_fn(n, |i, _| {
        if n == 1 {
            1.0
        } else {
            cond.powf(-(i as f64) / (n - 1) as f64)
        }
    });
    u * Mat::from_diagonal(&sigma) * v.transpose()
}

/// Random skew-symmetric matrix with the given Frobenius norm.
pub fn skew_with_norm<R: Rng + ?Sized>(n: usize, norm: f64, rng: &mut R) -> Mat {
    let g = gaussian(n, n, rng);
    let s = &g - g.transpose();
    let f = s.norm();
    s * (norm / f)
}
