//! Symmetric-space machinery for structured numerical linear algebra and
//! geometric integration.
//!
//! * [`matcore`] — dense kernel (`expm`, `logm`, `sqrtm`, SVD polar factors,
//!   Bernoulli numbers, text I/O).
//! * [`involutions`] — involutive automorphisms, algebra splittings,
//!   projectors and a checker for symmetric-space products.
//! * [`series`] — truncated symmetric BCH, generalized-polar and `dexp⁻¹`
//!   series.
//! * [`gpd`] — group-level generalized polar decomposition, analytic
//!   functions of 2-cyclic matrices and the polar-coordinates integrator.
//! * [`flows`] — one-step flows, conjugation by involutions and the Scovel,
//!   Thue–Morse, Yoshida and positive-step symmetrization compositions.
//! * [`experiments`] — the alternating-directions and stiff reaction–diffusion
//!   experiments plus CSV output.
//! * [`verify`] — randomized invariant suites used by `symspace verify`.

pub mod error;
pub mod experiments;
pub mod flows;
pub mod gpd;
pub mod involutions;
pub mod matcore;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use matcore::Mat;
