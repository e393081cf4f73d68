//! Truncated non-commutative series: the symmetric BCH formula, the
//! commutator expansion of the generalized polar factors and `dexp⁻¹`.

use crate::error::{Error, Result};
use crate::matcore::{ad_power, commutator, ensure_same_shape, ensure_square, BernoulliTable, Mat};

/// Highest total commutator degree kept by a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationOrder(u32);

impl TruncationOrder {
    pub fn new(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::UnsupportedOrder {
                op: "truncation",
                order,
                allowed: ">= 1",
            });
        }
        Ok(Self(order))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for TruncationOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        Self::new(order)
    }
}

fn check_pair(x: &Mat, y: &Mat) -> Result<()> {
    ensure_square(x)?;
    ensure_same_shape(x, y)
}

/// Symmetric BCH: `Z` with `exp(Z) ≈ exp(X) exp(Y) exp(X)`.
///
/// Order 1 gives `2X + Y`; order 3 adds `⅙[Y,[Y,X]] − ⅙[X,[X,Y]]`.
pub fn sym_bch(x: &Mat, y: &Mat, order: TruncationOrder) -> Result<Mat> {
    check_pair(x, y)?;
    match order.get() {
        1 => Ok(x * 2.0 + y),
        3 => {
            let yyx = commutator(y, &commutator(y, x));
            let xxy = commutator(x, &commutator(x, y));
            Ok(x * 2.0 + y + yyx / 6.0 - xxy / 6.0)
        }
        other => Err(Error::UnsupportedOrder {
            op: "sym_bch",
            order: other,
            allowed: "1 or 3",
        }),
    }
}

/// Commutator expansion of `(S, Q)` with `exp(P + K) = exp(S) exp(Q)`,
/// `S ∈ p`, `Q ∈ k`, truncated to total degree `order ≤ 4`:
///
/// ```text
/// S = P − ½[P,K] − ⅙[K,[P,K]] + (1/24)[P,[P,[P,K]]] − (1/24)[K,[K,[P,K]]] + …
/// Q = K − (1/12)[P,[P,K]] + …
/// ```
pub fn gpd_series(p: &Mat, k: &Mat, order: TruncationOrder) -> Result<(Mat, Mat)> {
    check_pair(p, k)?;
    let order = order.get();
    if order > 4 {
        return Err(Error::UnsupportedOrder {
            op: "gpd_series",
            order,
            allowed: "1..=4",
        });
    }
    let mut s = p.clone();
    let mut q = k.clone();
    if order >= 2 {
        let pk = commutator(p, k);
        s -= &pk * 0.5;
        if order >= 3 {
            let kpk = commutator(k, &pk);
            let ppk = commutator(p, &pk);
            s -= &kpk / 6.0;
            q -= &ppk / 12.0;
            if order >= 4 {
                let pppk = commutator(p, &ppk);
                let kkpk = commutator(k, &kpk);
                s += pppk / 24.0;
                s -= kkpk / 24.0;
            }
        }
    }
    Ok((s, q))
}

/// `Σ_{j=0}^{order} (B_j / j!) ad_A^j(V)`, the truncated inverse of the
/// trivialized tangent of `exp` at `A`.
pub fn dexpinv_apply(a: &Mat, v: &Mat, order: TruncationOrder) -> Result<Mat> {
    check_pair(a, v)?;
    let order = order.get();
    if order > 8 {
        return Err(Error::UnsupportedOrder {
            op: "dexpinv_apply",
            order,
            allowed: "1..=8",
        });
    }
    Ok(dexpinv_with(
        &BernoulliTable::default(),
        a,
        v,
        order as usize,
    ))
}

/// Same as [`dexpinv_apply`] without validation, reusing a table.
pub(crate) fn dexpinv_with(table: &BernoulliTable, a: &Mat, v: &Mat, order: usize) -> Mat {
    let mut term = v.clone();
    let mut out = v.clone();
    for j in 1..=order {
        term = commutator(a, &term);
        let c = table.over_factorial(j);
        if c != 0.0 {
            out += &term * c;
        }
    }
    out
}

/// Forward series `dexp_A(V) = Σ_{j≥0} ad_A^j(V)/(j+1)!` truncated at `terms`.
pub fn dexp_apply(a: &Mat, v: &Mat, terms: usize) -> Result<Mat> {
    check_pair(a, v)?;
    let mut out = Mat::zeros(v.nrows(), v.ncols());
    let mut fact = 1.0;
    for j in 0..terms {
        fact *= (j + 1) as f64;
        out += ad_power(a, v, j)? / fact;
    }
    Ok(out)
}
