//! Quick seeded invariant suites, one per module, used by `symspace verify`.
//!
//! Each suite evaluates a handful of measured quantities against fixed
//! tolerances and reports them individually; a suite passes iff every
//! check does.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::flows::problems::Problem;
use crate::flows::{
    estimate_order, scovel, symmetrize_coefficients, symmetry_defect, thue_morse,
    thue_morse_pattern, yoshida, yoshida_coefficients, Conjugation, DefectMode,
};
use crate::gpd::{analytic_fn_2cyclic, classical_polar, generalized_polar, AnalyticFn};
use crate::involutions::{check_symmetric_space_axioms, spd_product, Involution, InvolutionKind};
use crate::matcore::{commutator, expm, fro, logm, random, sqrtm, svd_polar, Mat};
use crate::series::{dexp_apply, dexpinv_apply, sym_bch, TruncationOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Matcore,
    Involutions,
    Series,
    Gpd,
    Flows,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Matcore,
        Suite::Involutions,
        Suite::Series,
        Suite::Gpd,
        Suite::Flows,
    ];

    /// `"all"` expands to every suite.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            Ok(Self::ALL.to_vec())
        } else {
            Ok(vec![s.parse()?])
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Matcore => "matcore",
            Suite::Involutions => "involutions",
            Suite::Series => "series",
            Suite::Gpd => "gpd",
            Suite::Flows => "flows",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite '{s}'")))
    }
}

/// One measured quantity and its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    /// `value ≤ bound` when true, `value ≥ bound` otherwise.
    pub upper: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            upper: true,
        }
    }

    fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            upper: false,
        }
    }

    pub fn passed(&self) -> bool {
        if self.upper {
            self.value <= self.bound
        } else {
            self.value >= self.bound
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.upper { "<=" } else { ">=" };
        write!(
            f,
            "{} {}: {:.3e} {op} {:.3e}",
            if self.passed() { "ok  " } else { "FAIL" },
            self.name,
            self.value,
            self.bound
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Runs one suite with a deterministic generator seeded by `seed`.
pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Matcore => matcore_checks(&mut rng)?,
        Suite::Involutions => involution_checks(&mut rng)?,
        Suite::Series => series_checks(&mut rng)?,
        Suite::Gpd => gpd_checks(&mut rng)?,
        Suite::Flows => flow_checks()?,
    };
    Ok(SuiteReport { suite, checks })
}

fn max_over<T>(
    items: impl IntoIterator<Item = T>,
    mut f: impl FnMut(T) -> Result<f64>,
) -> Result<f64> {
    let mut m = 0.0f64;
    for it in items {
        m = m.max(f(it)?);
    }
    Ok(m)
}

fn slope(points: &[(f64, f64)]) -> Result<f64> {
    // `estimate_order` wants decreasing h
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(estimate_order(&pts)?.slope)
}

fn matcore_checks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mats: Vec<Mat> = (0..10)
        .map(|_| random::gaussian_with_norm(4, 1.0, rng))
        .collect();
    let inverse_pair = max_over(&mats, |a| {
        let i = expm(a)? * expm(&-a)?;
        Ok((i - Mat::identity(4, 4)).amax())
    })?;
    let log_exp = max_over(&mats, |a| {
        let small = a * 0.5;
        Ok(fro(&(logm(&expm(&small)?)? - &small)))
    })?;
    let sqrt = max_over(0..10, |_| {
        let s = random::spd(4, 0.5, 2.0, rng);
        let r = sqrtm(&s)?;
        Ok(fro(&(&r * &r - &s)) / fro(&s))
    })?;
    let polar = max_over(0..10, |_| {
        let a = random::with_condition(5, 1e3, rng);
        let (s, q) = svd_polar(&a)?;
        Ok(fro(&(&s * &q - &a)).max(fro(&(q.transpose() * &q - Mat::identity(5, 5)))))
    })?;
    Ok(vec![
        Check::at_most("exp(A)exp(-A) = I", inverse_pair, 1e-13),
        Check::at_most("log(exp(A)) = A", log_exp, 1e-12),
        Check::at_most("sqrtm(S)^2 = S", sqrt, 1e-13),
        Check::at_most("svd polar factorization", polar, 1e-12),
    ])
}

fn all_involutions(rng: &mut ChaCha8Rng) -> Result<Vec<(Involution, usize)>> {
    let v = random::gaussian(4, 1, rng);
    let v = &v / v.norm();
    let householder = Mat::identity(4, 4) - &v * v.transpose() * 2.0;
    Ok(vec![
        (Involution::transpose_inverse(), 4),
        (Involution::conjugate(), 4),
        (Involution::new(InvolutionKind::Inner(householder))?, 4),
    ])
}

fn involution_checks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let invs = all_involutions(rng)?;
    let mut grading = 0.0f64;
    let mut brackets = 0.0f64;
    for (inv, n) in &invs {
        for _ in 0..10 {
            let x = random::gaussian(*n, *n, rng);
            let y = random::gaussian(*n, *n, rng);
            grading = grading.max(inv.split(&x)?.grading_residual()?);
            let (sx, sy) = (inv.split(&x)?, inv.split(&y)?);
            // [p,p] ⊆ k, [k,p] ⊆ p
            let pp = commutator(&sx.p, &sy.p);
            let kp = commutator(&sx.k, &sy.p);
            brackets = brackets
                .max(fro(&(inv.algebra_map(&pp)? - &pp)))
                .max(fro(&(inv.algebra_map(&kp)? + &kp)));
        }
    }
    let samples: Vec<Mat> = (0..5).map(|_| random::spd(3, 0.5, 2.0, rng)).collect();
    let axioms = check_symmetric_space_axioms(spd_product, &samples);
    let worst = axioms
        .idempotence
        .max(axioms.left_involution)
        .max(axioms.distributivity);
    Ok(vec![
        Check::at_most("splitting grading", grading, 1e-12),
        Check::at_most("bracket grading", brackets, 1e-12),
        Check::at_most(
            "symmetric-space axioms (spd)",
            if axioms.passed { worst } else { f64::INFINITY },
            1e-10,
        ),
    ])
}

fn series_checks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let a = random::gaussian(3, 3, rng);
    let b = random::gaussian(3, 3, rng);
    let order3 = TruncationOrder::new(3)?;
    let mut pts = Vec::new();
    for &eps in &[0.1, 0.05, 0.025, 0.0125] {
        let (x, y) = (&a * eps, &b * eps);
        let exact = logm(&(expm(&x)? * expm(&y)? * expm(&x)?))?;
        pts.push((eps, fro(&(sym_bch(&x, &y, order3)? - exact))));
    }
    let bch = slope(&pts)?;

    let a = random::gaussian_with_norm(3, 0.3, rng);
    let v = random::gaussian(3, 3, rng);
    let w = dexpinv_apply(&a, &v, TruncationOrder::new(8)?)?;
    let round_trip = fro(&(dexp_apply(&a, &w, 30)? - &v)) / fro(&v);
    Ok(vec![
        Check::at_least("symmetric BCH order-3 slope", bch, 4.7),
        Check::at_most("dexp(dexpinv(V)) = V", round_trip, 1e-6),
    ])
}

fn gpd_checks(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let polar_eq = max_over(0..10, |_| {
        let a = random::with_condition(5, 1e3, rng);
        let newton = classical_polar(&a, 1e-13, 50)?;
        let (_, q) = svd_polar(&a)?;
        Ok(fro(&(newton.k_factor - q)))
    })?;
    let inv = Involution::transpose_inverse();
    let small = expm(&random::gaussian_with_norm(4, 0.05, rng))?;
    let gpd = generalized_polar(&small, &inv, TruncationOrder::new(4)?)?.residual;

    let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]));
    let cyclic = max_over(0..5, |_| {
        let full = random::gaussian(4, 4, rng) * 0.5;
        let p = (&full - &s * &full * &s) * 0.5;
        let dense = expm(&p)?;
        Ok(fro(&(analytic_fn_2cyclic(&p, &s, AnalyticFn::Exp)? - dense)))
    })?;
    Ok(vec![
        Check::at_most("newton polar = svd polar", polar_eq, 1e-11),
        Check::at_most("generalized polar residual (|X| = 0.05)", gpd, 1e-6),
        Check::at_most("2-cyclic exp vs dense", cyclic, 1e-10),
    ])
}

fn flow_checks() -> Result<Vec<Check>> {
    let h = Problem::harmonic();
    let r = h.reversing().expect("oscillator has a reversing symmetry");
    let psi = scovel(&h.forward_euler(), &Conjugation::State(r.clone()));
    let reversing = max_over([0.2, 0.1, 0.05], |step| {
        symmetry_defect(&psi, r, &h.y0, step, 1, DefectMode::Reversing)
    })?;

    let ls = Problem::linear_sym();
    let s = ls.symmetry().expect("problem has a symmetry");
    let words_ok = (0..4).all(|k| {
        thue_morse(&ls.lie_trotter(), s, k, false).word() == Some(&thue_morse_pattern(k, false)[..])
    });

    let coeffs = (1..=6u32)
        .map(|p| {
            let e = (2 * p + 1) as i32;
            let (a, b) = yoshida_coefficients(p);
            let (c, d) = symmetrize_coefficients(p);
            (2.0 * a + b - 1.0)
                .abs()
                .max((2.0 * c + d - 1.0).abs())
                .max((2.0 * c.powi(e) - d.powi(e)).abs())
        })
        .fold(0.0, f64::max);

    let y4 = yoshida(&h.cayley(), 1);
    let exact = h.exact(h.t_end)?;
    let mut pts = Vec::new();
    for i in 0..5 {
        let n = 10usize << i;
        let step = h.t_end / n as f64;
        pts.push((step, (y4.run(step, &h.y0, n)? - &exact).amax()));
    }
    let order = slope(&pts)?;
    Ok(vec![
        Check::at_most("scovel reversing defect", reversing, 1e-12),
        Check::at_most("thue-morse words", if words_ok { 0.0 } else { 1.0 }, 0.0),
        Check::at_most("composition coefficient identities", coeffs, 1e-15),
        Check::at_least("yoshida(cayley) order", order, 3.7),
    ])
}
