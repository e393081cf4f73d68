use crate::error::{Error, Result};

use super::{ensure_finite, ensure_square, fro, norm1, Mat};

/// Degree of the diagonal Padé approximant used by [`expm`].
const PADE_DEGREE: usize = 8;
/// The argument is scaled until its 1-norm is at most this value.
const EXPM_THETA: f64 = 0.5;

/// Principal matrix exponential by scaling and squaring with a diagonal
/// Padé approximant.
///
/// Overflow (or any non-finite intermediate) is reported as
/// [`Error::Diverged`] so that stability experiments can record it.
pub fn expm(a: &Mat) -> Result<Mat> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    let norm = norm1(a);
    let squarings = if norm > EXPM_THETA {
        (norm / EXPM_THETA).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * 2f64.powi(-squarings);

    let id = Mat::identity(n, n);
    let mut num = id.clone();
    let mut den = id.clone();
    let mut power = id.clone();
    let mut c = 1.0;
    let m = PADE_DEGREE as f64;
    for k in 1..=PADE_DEGREE {
        let kf = k as f64;
        c *= (m - kf + 1.0) / ((2.0 * m - kf + 1.0) * kf);
        power = &power * &scaled;
        num += &power * c;
        if k % 2 == 0 {
            den += &power * c;
        } else {
            den -= &power * c;
        }
    }
    let mut r = den.lu().solve(&num).ok_or(Error::Diverged)?;
    for _ in 0..squarings {
        r = &r * &r;
        if !r.iter().all(|v| v.is_finite()) {
            return Err(Error::Diverged);
        }
    }
    if !r.iter().all(|v| v.is_finite()) {
        return Err(Error::Diverged);
    }
    Ok(r)
}

/// Rejects matrices with an eigenvalue on the closed negative real axis.
fn check_principal_domain(a: &Mat) -> Result<()> {
    let scale = fro(a).max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale;
    for ev in a.complex_eigenvalues().iter() {
        if ev.im.abs() <= tol && ev.re <= tol {
            return Err(Error::LogDomain {
                re: ev.re,
                im: ev.im,
            });
        }
    }
    Ok(())
}

/// Denman–Beavers iteration with determinant scaling; assumes the domain
/// check has already been performed.
fn sqrtm_unchecked(a: &Mat) -> Result<Mat> {
    const MAX_ITER: usize = 100;
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = Mat::identity(n, n);
    let mut scaling = true;
    let mut last = f64::INFINITY;
    for _ in 0..MAX_ITER {
        if scaling {
            let dy = y.determinant().abs();
            let dz = z.determinant().abs();
            let mu = (dy * dz).powf(-1.0 / (2.0 * n as f64));
            if mu.is_finite() && mu > 0.0 {
                y *= mu;
                z *= mu;
            }
        }
        let yi = y.clone().try_inverse().ok_or(Error::Singular)?;
        let zi = z.clone().try_inverse().ok_or(Error::Singular)?;
        let y_next = (&y + zi) * 0.5;
        let z_next = (&z + yi) * 0.5;
        let change = fro(&(&y_next - &y)) / fro(&y_next);
        y = y_next;
        z = z_next;
        if change < 1e-2 {
            scaling = false;
        }
        if change <= 1e-15 || (change < 1e-12 && change >= last) {
            return Ok(y);
        }
        last = change;
    }
    let residual = fro(&(&y * &y - a)) / fro(a);
    if residual <= 1e-11 {
        Ok(y)
    } else {
        Err(Error::NoConvergence {
            what: "sqrtm",
            iterations: MAX_ITER,
            residual,
        })
    }
}

/// Principal matrix square root.
pub fn sqrtm(a: &Mat) -> Result<Mat> {
    ensure_square(a)?;
    ensure_finite(a)?;
    check_principal_domain(a)?;
    sqrtm_unchecked(a)
}

/// Principal matrix logarithm by inverse scaling and squaring: repeated
/// square roots bring the argument close to the identity, after which the
/// series `log M = 2 Σ Z^{2j+1}/(2j+1)`, `Z = (M − I)(M + I)⁻¹`, converges fast.
pub fn logm(a: &Mat) -> Result<Mat> {
    const MAX_ROOTS: i32 = 64;
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    check_principal_domain(a)?;
    let id = Mat::identity(n, n);
    let mut m = a.clone();
    let mut roots = 0;
    while fro(&(&m - &id)) > 0.25 {
        if roots == MAX_ROOTS {
            return Err(Error::NoConvergence {
                what: "logm square-root reduction",
                iterations: MAX_ROOTS as usize,
                residual: fro(&(&m - &id)),
            });
        }
        m = sqrtm_unchecked(&m)?;
        roots += 1;
    }
    // M − I and M + I commute, so the left solve gives the same Z.
    let z = (&m + &id).lu().solve(&(&m - &id)).ok_or(Error::Singular)?;
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = z.clone();
    for j in 1..200 {
        term = &term * &z2;
        let contrib = &term / (2 * j + 1) as f64;
        sum += &contrib;
        if fro(&contrib) <= 1e-18 * fro(&sum).max(1e-300) {
            break;
        }
    }
    Ok(sum * 2.0 * 2f64.powi(roots))
}

/// Classical polar factors `A = s·q` (`s` symmetric positive definite, `q`
/// orthogonal) from a singular value decomposition `A = UΣVᵀ`:
/// `s = UΣUᵀ`, `q = UVᵀ`.
pub fn svd_polar(a: &Mat) -> Result<(Mat, Mat)> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    let svd = a.clone().svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::Singular),
    };
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= (n as f64) * f64::EPSILON * smax {
        return Err(Error::Singular);
    }
    let sigma = Mat::from_diagonal(&svd.singular_values);
    // The bidiagonal SVD occasionally returns an inaccurate factorization;
    // verify it and fall back to the symmetric eigenproblem of AAᵀ.
    if fro(&(&u * &sigma * &vt - a)) > 1e-12 * fro(a) {
        return polar_via_eigen(a);
    }
    let s = &u * sigma * u.transpose();
    let q = &u * vt;
    // symmetrise to remove rounding asymmetry
    let s = (&s + s.transpose()) * 0.5;
    Ok((s, q))
}

/// `s = (AAᵀ)^{1/2}`, `q = s⁻¹A`.
fn polar_via_eigen(a: &Mat) -> Result<(Mat, Mat)> {
    let eig = (a * a.transpose()).symmetric_eigen();
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::Singular);
    }
    let u = &eig.eigenvectors;
    let root = eig.eigenvalues.map(f64::sqrt);
    let s = u * Mat::from_diagonal(&root) * u.transpose();
    let s_inv = u * Mat::from_diagonal(&root.map(|v| 1.0 / v)) * u.transpose();
    let s = (&s + s.transpose()) * 0.5;
    Ok((s, s_inv * a))
}
