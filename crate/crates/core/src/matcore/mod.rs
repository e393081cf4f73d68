//! Dense matrix kernel: exponential, logarithm, square root, SVD-based polar
//! factors, commutator powers, Bernoulli numbers and a plain-text matrix
//! format.
//!
//! All matrices are `nalgebra::DMatrix<f64>`; every tolerance in this crate is
//! measured in the Frobenius norm unless stated otherwise.

mod bernoulli;
mod functions;
mod io;
pub mod random;

pub use bernoulli::BernoulliTable;
pub use functions::{expm, logm, sqrtm, svd_polar};
pub use io::{format_matrix, parse_matrix, read_matrix, write_matrix};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real matrix carrying group and algebra elements as well as grid fields.
pub type Mat = DMatrix<f64>;

/// Build a matrix from row-major data, rejecting non-finite entries.
pub fn from_rows(rows: usize, cols: usize, data: &[f64]) -> Result<Mat> {
    if data.len() != rows * cols {
        return Err(Error::ShapeMismatch {
            expected: (rows, cols),
            found: (data.len(), 1),
        });
    }
    let m = Mat::from_row_slice(rows, cols, data);
    ensure_finite(&m)?;
    Ok(m)
}

pub fn ensure_finite(a: &Mat) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Returns the dimension of a square matrix or a `NotSquare` error.
pub fn ensure_square(a: &Mat) -> Result<usize> {
    if a.nrows() == a.ncols() {
        Ok(a.nrows())
    } else {
        Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

pub fn ensure_same_shape(a: &Mat, b: &Mat) -> Result<()> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        })
    }
}

/// Frobenius norm.
#[inline]
pub fn fro(a: &Mat) -> f64 {
    a.norm()
}

/// Induced 1-norm (max column sum).
pub fn norm1(a: &Mat) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// The commutator `[a, b] = ab - ba`. Shapes are assumed to agree.
#[inline]
pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

/// `ad_A^j(V)`, with `ad_A(V) = AV - VA` and `ad_A^0(V) = V`.
pub fn ad_power(a: &Mat, v: &Mat, j: usize) -> Result<Mat> {
    ensure_square(a)?;
    ensure_same_shape(a, v)?;
    let mut out = v.clone();
    for _ in 0..j {
        out = commutator(a, &out);
    }
    Ok(out)
}
