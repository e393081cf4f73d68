//! Involutive automorphisms at group level (`σ`) and algebra level (`dσ`),
//! the induced `p ⊕ k` splitting, projector pairs of involutive matrices and
//! a numerical checker for symmetric-space products.

use std::fmt;
use std::path::Path;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matcore::{self, ensure_same_shape, ensure_square, expm, fro, logm, Mat};

/// Tolerance on `r² = I` for inner involutions.
pub const INNER_TOLERANCE: f64 = 1e-14;
/// Tolerance on `S² = I` for projector construction.
pub const PROJECTOR_TOLERANCE: f64 = 1e-12;
/// Pass threshold of [`check_symmetric_space_axioms`].
pub const AXIOM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum InvolutionKind {
    /// `σ(x) = x⁻ᵀ`, `dσ(X) = −Xᵀ`.
    TransposeInverse,
    /// Complex conjugation acting on the real embedding of complex matrices.
    /// The embedding maps `a + ib` to the 2×2 block `[[a, −b], [b, a]]`, so
    /// conjugation is `x ↦ C x C` with `C = diag(1, −1, 1, −1, …)`.
    Conjugate,
    /// `σ(x) = r x r`, `dσ(X) = r X r` for an involutive `r`.
    Inner(Mat),
}

/// A paired group automorphism `σ` and its differential `dσ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Involution {
    kind: InvolutionKind,
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            InvolutionKind::TransposeInverse => write!(f, "transpose-inverse"),
            InvolutionKind::Conjugate => write!(f, "conjugate"),
            InvolutionKind::Inner(r) => write!(f, "inner({}x{})", r.nrows(), r.ncols()),
        }
    }
}

impl Involution {
    /// Validating constructor for any kind.
    pub fn new(kind: InvolutionKind) -> Result<Self> {
        match kind {
            InvolutionKind::Inner(r) => Self::inner(r),
            kind => Ok(Self { kind }),
        }
    }

    pub fn transpose_inverse() -> Self {
        Self {
            kind: InvolutionKind::TransposeInverse,
        }
    }

    pub fn conjugate() -> Self {
        Self {
            kind: InvolutionKind::Conjugate,
        }
    }

    /// Inner involution `x ↦ r x r`; rejects `r` unless `‖r² − I‖_F ≤ 1e−14`.
    pub fn inner(r: Mat) -> Result<Self> {
        let n = ensure_square(&r)?;
        matcore::ensure_finite(&r)?;
        let residual = fro(&(&r * &r - Mat::identity(n, n)));
        if residual > INNER_TOLERANCE {
            return Err(Error::NotInvolutive { residual });
        }
        Ok(Self {
            kind: InvolutionKind::Inner(r),
        })
    }

    /// Parses a command-line id: `transpose-inverse`, `conjugate` or
    /// `inner:<path-to-matrix-file>`.
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "transpose-inverse" => Ok(Self::transpose_inverse()),
            "conjugate" => Ok(Self::conjugate()),
            _ => match id.strip_prefix("inner:") {
                Some(path) if !path.is_empty() => {
                    Self::inner(matcore::read_matrix(Path::new(path))?)
                }
                _ => Err(Error::InvalidConfig(format!(
                    "unknown involution id {id:?} (expected transpose-inverse, conjugate or inner:<path>)"
                ))),
            },
        }
    }

    pub fn kind(&self) -> &InvolutionKind {
        &self.kind
    }

    fn conjugation_signs(n: usize) -> Result<DVector<f64>> {
        if n % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "conjugate involution needs an even (real-embedded) dimension, got {n}"
            )));
        }
        Ok(DVector::from_fn(
            n,
            |i, _| if i % 2 == 0 { 1.0 } else { -1.0 },
        ))
    }

    /// `C x C` with `C` diagonal ±1, computed entrywise.
    fn flip_signs(x: &Mat) -> Result<Mat> {
        let c = Self::conjugation_signs(x.nrows())?;
        Ok(Mat::from_fn(x.nrows(), x.ncols(), |i, j| {
            c[i] * c[j] * x[(i, j)]
        }))
    }

    fn check_inner_shape(r: &Mat, x: &Mat) -> Result<()> {
        if r.nrows() != x.nrows() || r.ncols() != x.ncols() {
            return Err(Error::ShapeMismatch {
                expected: r.shape(),
                found: x.shape(),
            });
        }
        Ok(())
    }

    /// The group-level map `σ`.
    pub fn group_map(&self, x: &Mat) -> Result<Mat> {
        ensure_square(x)?;
        match &self.kind {
            InvolutionKind::TransposeInverse => x
                .clone()
                .try_inverse()
                .map(|xi| xi.transpose())
                .ok_or(Error::Singular),
            InvolutionKind::Conjugate => Self::flip_signs(x),
            InvolutionKind::Inner(r) => {
                Self::check_inner_shape(r, x)?;
                Ok(r * x * r)
            }
        }
    }

    /// The algebra-level map `dσ`.
    pub fn algebra_map(&self, x: &Mat) -> Result<Mat> {
        ensure_square(x)?;
        match &self.kind {
            InvolutionKind::TransposeInverse => Ok(-x.transpose()),
            InvolutionKind::Conjugate => Self::flip_signs(x),
            InvolutionKind::Inner(r) => {
                Self::check_inner_shape(r, x)?;
                Ok(r * x * r)
            }
        }
    }

    /// Splits `X = P + K` with `dσP = −P` and `dσK = K`.
    pub fn split(&self, x: &Mat) -> Result<Splitting> {
        let d = self.algebra_map(x)?;
        let p = (x - &d) * 0.5;
        let k = (x + &d) * 0.5;
        Ok(Splitting {
            p,
            k,
            source: self.clone(),
        })
    }

    /// Component of `X` in the `−1` eigenspace (the Lie triple system).
    pub fn p_part(&self, x: &Mat) -> Result<Mat> {
        Ok((x - self.algebra_map(x)?) * 0.5)
    }

    /// Component of `X` in the `+1` eigenspace (the subalgebra).
    pub fn k_part(&self, x: &Mat) -> Result<Mat> {
        Ok((x + self.algebra_map(x)?) * 0.5)
    }

    /// The symmetric-space product `x·y = x σ(y) x`; on the set
    /// `{x : σ(x) = x⁻¹}` it is `x y⁻¹ x`.
    pub fn gsigma_product(&self, x: &Mat, y: &Mat) -> Result<Mat> {
        ensure_same_shape(x, y)?;
        Ok(x * self.group_map(y)? * x)
    }
}

/// `X = P + K` with `P` in the `−1` and `K` in the `+1` eigenspace of `dσ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    pub p: Mat,
    pub k: Mat,
    pub source: Involution,
}

impl Splitting {
    /// `P + K`; reproduces the split input up to rounding.
    pub fn reconstruct(&self) -> Mat {
        &self.p + &self.k
    }

    /// `max(‖dσP + P‖, ‖dσK − K‖)`.
    pub fn grading_residual(&self) -> Result<f64> {
        let rp = fro(&(self.source.algebra_map(&self.p)? + &self.p));
        let rk = fro(&(self.source.algebra_map(&self.k)? - &self.k));
        Ok(rp.max(rk))
    }
}

/// `Π⁺ = ½(I + S)` and `Π⁻ = ½(I − S)` for an involutive matrix `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorPair {
    pub plus: Mat,
    pub minus: Mat,
}

pub fn projectors(s: &Mat) -> Result<ProjectorPair> {
    let n = ensure_square(s)?;
    matcore::ensure_finite(s)?;
    let id = Mat::identity(n, n);
    let residual = fro(&(s * s - &id));
    if residual > PROJECTOR_TOLERANCE {
        return Err(Error::NotInvolutive { residual });
    }
    Ok(ProjectorPair {
        plus: (&id + s) * 0.5,
        minus: (&id - s) * 0.5,
    })
}

/// `σ(x) = exp(dσ(log x))`, lifting the algebra map to the group.
pub fn lift_group_automorphism(inv: &Involution, x: &Mat) -> Result<Mat> {
    expm(&inv.algebra_map(&logm(x)?)?)
}

/// Embeds the complex matrix `re + i·im` as a real matrix of twice the size
/// (the layout understood by [`InvolutionKind::Conjugate`]).
pub fn complex_embed(re: &Mat, im: &Mat) -> Result<Mat> {
    ensure_same_shape(re, im)?;
    let (r, c) = re.shape();
    let mut out = Mat::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let (a, b) = (re[(i, j)], im[(i, j)]);
            out[(2 * i, 2 * j)] = a;
            out[(2 * i, 2 * j + 1)] = -b;
            out[(2 * i + 1, 2 * j)] = b;
            out[(2 * i + 1, 2 * j + 1)] = a;
        }
    }
    Ok(out)
}

/// Maximum residuals of the three checkable symmetric-space axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    /// `x·x = x`
    pub idempotence: f64,
    /// `x·(x·y) = y`
    pub left_involution: f64,
    /// `x·(y·z) = (x·y)·(x·z)`
    pub distributivity: f64,
    /// Product evaluations that failed (singular intermediates and the like).
    pub failures: Vec<String>,
    pub passed: bool,
}

fn relative_gap(a: &Mat, b: &Mat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let r = fro(&(a - b)) / fro(b).max(1.0);
    if r.is_nan() {
        f64::INFINITY
    } else {
        r
    }
}

/// Evaluates axioms (i)–(iii) of a symmetric-space product on every sample,
/// sample pair and sample triple. Residuals are relative
/// (`‖lhs − rhs‖ / max(1, ‖rhs‖)`); the report passes iff no evaluation
/// failed and every residual is at most [`AXIOM_TOLERANCE`].
pub fn check_symmetric_space_axioms<F>(product: F, samples: &[Mat]) -> AxiomReport
where
    F: Fn(&Mat, &Mat) -> Result<Mat>,
{
    let mut report = AxiomReport {
        idempotence: 0.0,
        left_involution: 0.0,
        distributivity: 0.0,
        failures: Vec::new(),
        passed: false,
    };
    let note = |report: &mut AxiomReport, what: &str, e: Error| {
        report.failures.push(format!("{what}: {e}"));
    };

    for (i, x) in samples.iter().enumerate() {
        match product(x, x) {
            Ok(xx) => report.idempotence = report.idempotence.max(relative_gap(&xx, x)),
            Err(e) => note(&mut report, &format!("x{i}·x{i}"), e),
        }
        for (j, y) in samples.iter().enumerate() {
            let xy = match product(x, y) {
                Ok(v) => v,
                Err(e) => {
                    note(&mut report, &format!("x{i}·x{j}"), e);
                    continue;
                }
            };
            match product(x, &xy) {
                Ok(v) => report.left_involution = report.left_involution.max(relative_gap(&v, y)),
                Err(e) => note(&mut report, &format!("x{i}·(x{i}·x{j})"), e),
            }
            for (k, z) in samples.iter().enumerate() {
                let lhs = product(y, z).and_then(|yz| product(x, &yz));
                let rhs = product(x, z).and_then(|xz| product(&xy, &xz));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        report.distributivity = report.distributivity.max(relative_gap(&l, &r))
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        note(&mut report, &format!("distributivity ({i},{j},{k})"), e)
                    }
                }
            }
        }
    }
    report.passed = report.failures.is_empty()
        && report.idempotence <= AXIOM_TOLERANCE
        && report.left_involution <= AXIOM_TOLERANCE
        && report.distributivity <= AXIOM_TOLERANCE;
    report
}

/// `a·b = a b⁻¹ a`, the product on symmetric positive definite matrices.
pub fn spd_product(a: &Mat, b: &Mat) -> Result<Mat> {
    ensure_same_shape(a, b)?;
    let x = b.clone().lu().solve(a).ok_or(Error::Singular)?;
    Ok(a * x)
}

/// `x·y = (2xxᵀ − I) y`, reflection through the line of a unit vector `x`.
pub fn sphere_product(x: &Mat, y: &Mat) -> Result<Mat> {
    ensure_same_shape(x, y)?;
    let dot = (x.transpose() * y)[(0, 0)];
    Ok(x * (2.0 * dot) - y)
}
