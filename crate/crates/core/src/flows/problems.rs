//! Linear test problems with known exact flows and split base methods.
//!
//! | name         | vector field            | symmetry `S`      | reversing `R`       |
//! |--------------|-------------------------|-------------------|---------------------|
//! | `harmonic`   | `q' = p, p' = −q`        | —                 | `diag(1, −1)`       |
//! | `linear-sym` | `A = [[−1, .3], [.3, −1]]` | swap              | —                   |
//! | `so3`        | `Ω = hat(0, 1, −1)`      | swap of `y₂, y₃`  | `diag(−1, 1, 1)`    |

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{Flow, InvolutiveStateMap, State};
use crate::error::{Error, Result};
use crate::matcore::{expm, Mat};

/// A linear ODE `y' = A y`, `A = A₁ + A₂`, with its exact flow, a
/// first-order and a self-adjoint second-order split method and the
/// involutions relevant to it.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: &'static str,
    pub y0: State,
    pub t_end: f64,
    a1: Mat,
    a2: Mat,
    symmetry: Option<InvolutiveStateMap>,
    reversing: Option<InvolutiveStateMap>,
}

pub const PROBLEM_NAMES: [&str; 3] = ["harmonic", "linear-sym", "so3"];

/// `hat(w)` with `hat(w) v = w × v`.
pub fn hat(w: [f64; 3]) -> Mat {
    DMatrix::from_row_slice(
        3,
        3,
        &[0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0],
    )
}

fn swap_matrix(n: usize, i: usize, j: usize) -> Mat {
    let mut s = DMatrix::identity(n, n);
    s.swap_rows(i, j);
    s
}

impl Problem {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "harmonic" => Ok(Self::harmonic()),
            "linear-sym" => Ok(Self::linear_sym()),
            "so3" => Ok(Self::so3()),
            other => Err(Error::InvalidConfig(format!(
                "unknown problem '{other}' (expected one of {})",
                PROBLEM_NAMES.join(", ")
            ))),
        }
    }

    /// Harmonic oscillator split into drift and kick.
    pub fn harmonic() -> Self {
        Self {
            name: "harmonic",
            y0: DVector::from_vec(vec![1.0, 0.0]),
            t_end: 1.0,
            a1: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            a2: DMatrix::from_row_slice(2, 2, &[0.0, 0.0, -1.0, 0.0]),
            symmetry: None,
            reversing: Some(InvolutiveStateMap::linear(
                "R",
                DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0])),
            )),
        }
    }

    /// `A₁ = [[−1, 0.3], [0, 0]]`, `A₂ = S A₁ S` with `S` the coordinate swap.
    pub fn linear_sym() -> Self {
        let a1 = DMatrix::from_row_slice(2, 2, &[-1.0, 0.3, 0.0, 0.0]);
        let s = swap_matrix(2, 0, 1);
        let a2 = &s * &a1 * &s;
        Self {
            name: "linear-sym",
            y0: DVector::from_vec(vec![1.0, 0.2]),
            t_end: 1.0,
            a1,
            a2,
            symmetry: Some(InvolutiveStateMap::linear("S", s)),
            reversing: None,
        }
    }

    /// Rigid rotation about `(0, 1, −1)` split as `hat(0,1,0) + hat(0,0,−1)`.
    pub fn so3() -> Self {
        Self {
            name: "so3",
            y0: DVector::from_vec(vec![1.0, 0.5, -0.3]),
            t_end: 1.0,
            a1: hat([0.0, 1.0, 0.0]),
            a2: hat([0.0, 0.0, -1.0]),
            symmetry: Some(InvolutiveStateMap::linear("S", swap_matrix(3, 1, 2))),
            reversing: Some(InvolutiveStateMap::linear(
                "R",
                DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0, 1.0])),
            )),
        }
    }

    pub fn generator(&self) -> Mat {
        &self.a1 + &self.a2
    }

    pub fn splitting(&self) -> (&Mat, &Mat) {
        (&self.a1, &self.a2)
    }

    pub fn symmetry(&self) -> Option<&InvolutiveStateMap> {
        self.symmetry.as_ref()
    }

    pub fn reversing(&self) -> Option<&InvolutiveStateMap> {
        self.reversing.as_ref()
    }

    pub fn exact(&self, t: f64) -> Result<State> {
        Ok(expm(&(self.generator() * t))? * &self.y0)
    }

    /// Forward Euler `y ↦ (I + hA) y`; its adjoint is backward Euler.
    pub fn forward_euler(&self) -> Flow {
        let a = self.generator();
        let n = a.nrows();
        let (af, ab) = (a.clone(), a);
        Flow::new(format!("euler[{}]", self.name), 1, move |h, y| {
            Ok(y + (&af * y) * h)
        })
        .with_adjoint(move |h, y| {
            (DMatrix::identity(n, n) - &ab * h)
                .lu()
                .solve(y)
                .ok_or(Error::Singular)
        })
    }

    /// Lie–Trotter `e^{hA₂} e^{hA₁}` (`A₁` acts first).
    pub fn lie_trotter(&self) -> Flow {
        exp_product(
            format!("lie[{}]", self.name),
            1,
            vec![(self.a1.clone(), 1.0), (self.a2.clone(), 1.0)],
        )
    }

    /// Strang `e^{hA₁/2} e^{hA₂} e^{hA₁/2}`.
    pub fn strang(&self) -> Flow {
        exp_product(
            format!("strang[{}]", self.name),
            2,
            vec![
                (self.a1.clone(), 0.5),
                (self.a2.clone(), 1.0),
                (self.a1.clone(), 0.5),
            ],
        )
    }

    /// Implicit midpoint rule, i.e. the Cayley map `(I − hA/2)⁻¹(I + hA/2)`.
    pub fn cayley(&self) -> Flow {
        let a = self.generator();
        let n = a.nrows();
        let cayley = move |h: f64, y: &State| -> Result<State> {
            let id = DMatrix::<f64>::identity(n, n);
            (&id - &a * (h / 2.0))
                .lu()
                .solve(&((&id + &a * (h / 2.0)) * y))
                .ok_or(Error::Singular)
        };
        let cayley = Arc::new(cayley);
        let inv = cayley.clone();
        Flow::new(format!("cayley[{}]", self.name), 2, move |h, y| {
            cayley(h, y)
        })
        .with_inverse(move |h, y| inv(-h, y))
    }

    /// First-order base used by the composition schemes: Euler for the
    /// oscillator, Lie–Trotter otherwise.
    pub fn first_order(&self) -> Flow {
        match self.name {
            "harmonic" => self.forward_euler(),
            _ => self.lie_trotter(),
        }
    }

    /// Self-adjoint second-order base (Störmer–Verlet for the oscillator).
    pub fn selfadjoint(&self) -> Flow {
        self.strang()
    }
}

/// `y ↦ e^{c_m h M_m} ⋯ e^{c_1 h M_1} y`, factors listed in application
/// order, inverted exactly.
pub fn exp_product(name: String, order: u32, factors: Vec<(Mat, f64)>) -> Flow {
    let fwd = Arc::new(factors);
    let back = fwd.clone();
    Flow::new(name, order, move |h, y| {
        let mut y = y.clone();
        for (m, c) in fwd.iter() {
            y = expm(&(m * (c * h)))? * y;
        }
        Ok(y)
    })
    .with_inverse(move |h, y| {
        let mut y = y.clone();
        for (m, c) in back.iter().rev() {
            y = expm(&(m * (-c * h)))? * y;
        }
        Ok(y)
    })
}
