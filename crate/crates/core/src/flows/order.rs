use crate::error::{Error, Result};

/// Errors at or below this are rounding noise and excluded from fits.
pub const ORDER_FLOOR: f64 = 1e-14;

/// Least-squares fit of `log e = q log h + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Largest deviation of a fitted point from the line, in `log` units.
    pub residual: f64,
    /// Number of ladder points used.
    pub points: usize,
}

/// Estimates the convergence order from `(h, error)` pairs with strictly
/// decreasing `h`. Points with non-finite errors or errors at or below
/// [`ORDER_FLOOR`] are dropped; at least four must remain.
pub fn estimate_order(ladder: &[(f64, f64)]) -> Result<OrderEstimate> {
    if ladder.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(Error::InvalidConfig(
            "step ladder must be strictly decreasing".into(),
        ));
    }
    if ladder.iter().any(|&(h, _)| !(h > 0.0) || !h.is_finite()) {
        return Err(Error::InvalidConfig("step sizes must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = ladder
        .iter()
        .filter(|(_, e)| e.is_finite() && *e > ORDER_FLOOR)
        .map(|&(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData {
            usable: pts.len(),
            required: 4,
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    Ok(OrderEstimate {
        slope,
        intercept,
        residual,
        points: pts.len(),
    })
}
