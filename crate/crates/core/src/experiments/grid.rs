use nalgebra::{DMatrix, DVector};

use crate::flows::{InvolutiveStateMap, State};

/// A scalar field on a uniform, isotropic, periodic `n × n` grid over
/// `[−L, L)²`. Rows index `x`, columns index `y`, so transposing the value
/// matrix swaps the two coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub n: usize,
    pub half_width: f64,
    pub values: DMatrix<f64>,
}

impl GridState {
    pub fn from_fn(n: usize, half_width: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let delta = 2.0 * half_width / n as f64;
        let x = |i: usize| -half_width + delta * i as f64;
        Self {
            n,
            half_width,
            values: DMatrix::from_fn(n, n, |i, j| f(x(i), x(j))),
        }
    }

    /// `e^{−a(x² + y²)}`.
    pub fn gaussian(n: usize, half_width: f64, a: f64) -> Self {
        Self::from_fn(n, half_width, |x, y| (-a * (x * x + y * y)).exp())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Column-major flattening used as the flow state.
    pub fn to_state(&self) -> State {
        DVector::from_column_slice(self.values.as_slice())
    }

    pub fn with_state(&self, y: &State) -> Self {
        Self {
            n: self.n,
            half_width: self.half_width,
            values: DMatrix::from_column_slice(self.n, self.n, y.as_slice()),
        }
    }

    /// `max |u(x, y) − u(y, x)|`.
    pub fn transpose_defect(&self) -> f64 {
        (&self.values - self.values.transpose()).amax()
    }
}

/// Grid transposition `u(x, y) ↦ u(y, x)` acting on flattened states.
pub fn transpose_map(n: usize) -> InvolutiveStateMap {
    InvolutiveStateMap::new("transpose", move |y| {
        DVector::from_column_slice(
            DMatrix::from_column_slice(n, n, y.as_slice())
                .transpose()
                .as_slice(),
        )
    })
}

/// Dense periodic circulant matrix whose row `i` carries `stencil[k]` in
/// column `i + k − stencil.len()/2 (mod n)`.
pub fn circulant(n: usize, stencil: &[f64]) -> DMatrix<f64> {
    let c = stencil.len() / 2;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for (k, &s) in stencil.iter().enumerate() {
            m[(i, (i + n + k - c) % n)] += s;
        }
    }
    m
}

/// Periodic central first difference `[−1, 0, 1]/(2δ)` in `x`.
pub fn central_difference(n: usize, delta: f64) -> DMatrix<f64> {
    circulant(n, &[-1.0 / (2.0 * delta), 0.0, 1.0 / (2.0 * delta)])
}

/// Periodic second difference `[1, −2, 1]/δ²` in `x`.
pub fn laplacian_1d(n: usize, delta: f64) -> DMatrix<f64> {
    let d2 = 1.0 / (delta * delta);
    circulant(n, &[d2, -2.0 * d2, d2])
}

/// Applies a three-point periodic stencil along the `x` (row) index:
/// `out[i, j] = s₀ u[i−1, j] + s₁ u[i, j] + s₂ u[i+1, j]`. Equivalent to
/// `circulant(n, s) * u`, without the dense product.
pub fn apply_stencil_x(u: &DMatrix<f64>, s: [f64; 3]) -> DMatrix<f64> {
    let n = u.nrows();
    DMatrix::from_fn(n, u.ncols(), |i, j| {
        s[0] * u[((i + n - 1) % n, j)] + s[1] * u[(i, j)] + s[2] * u[((i + 1) % n, j)]
    })
}
