use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::problems::Problem;
use super::*;

fn vec2(a: f64, b: f64) -> State {
    DVector::from_vec(vec![a, b])
}

fn rot_generator() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

fn euler(a: DMatrix<f64>) -> Flow {
    Flow::new("euler", 1, move |h, y| Ok(y + (&a * y) * h))
}

fn logistic() -> Flow {
    Flow::new("logistic", 1, |h, y: &State| {
        Ok(y.map(|v| v + h * v * (1.0 - v)))
    })
}

#[test]
fn scovel_of_euler_under_time_reversal_is_cayley() {
    let a = rot_generator();
    let psi = scovel(&euler(a.clone()), &Conjugation::TimeReversal);
    let id = DMatrix::<f64>::identity(2, 2);
    for &h in &[0.3, 0.1, -0.05] {
        let y = vec2(0.4, -1.3);
        let oracle = (&id - &a * (h / 2.0))
            .lu()
            .solve(&((&id + &a * (h / 2.0)) * &y))
            .unwrap();
        assert!((psi.step(h, &y).unwrap() - oracle).amax() < 1e-12);
        assert!(selfadjoint_defect(&psi, h, &y).unwrap() < 1e-11);
    }
}

#[test]
fn euler_fails_selfadjoint_round_trip_quadratically() {
    let f = euler(rot_generator());
    let y = vec2(1.0, 0.0);
    let d1 = selfadjoint_defect(&f, 0.1, &y).unwrap();
    let d2 = selfadjoint_defect(&f, 0.05, &y).unwrap();
    assert!(d1 > 1e-3);
    assert!(((d1 / d2).log2() - 2.0).abs() < 0.05);
}

#[test]
fn scovel_enforces_reversing_symmetry_on_oscillator() {
    let p = Problem::harmonic();
    let r = p.reversing().unwrap().clone();
    let base = p.forward_euler();
    let psi = scovel(&base, &Conjugation::State(r.clone()));
    for &h in &[0.2, 0.1, 0.05] {
        let d = symmetry_defect(&psi, &r, &p.y0, h, 1, DefectMode::Reversing).unwrap();
        assert!(d < 1e-12, "h={h}: {d}");
    }
    let raw: Vec<f64> = [0.1, 0.05]
        .iter()
        .map(|&h| symmetry_defect(&base, &r, &p.y0, h, 1, DefectMode::Reversing).unwrap())
        .collect();
    assert!(((raw[0] / raw[1]).log2() - 2.0).abs() < 0.1);
}

#[test]
fn conjugation_is_involutive_and_matches_matrix_product() {
    let m = DMatrix::from_row_slice(2, 2, &[0.9, 0.2, -0.1, 1.1]);
    let s = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let mm = m.clone();
    let flow = Flow::new("lin", 1, move |_, y| Ok(&mm * y));
    let t = InvolutiveStateMap::linear("S", s.clone());
    let y = vec2(0.3, -0.7);
    let once = conjugate_flow(&flow, &t);
    assert!((once.step(0.1, &y).unwrap() - &s * &m * &s * &y).amax() < 1e-15);
    let twice = conjugate_flow(&once, &t);
    assert!((twice.step(0.1, &y).unwrap() - flow.step(0.1, &y).unwrap()).amax() < 1e-14);
    let ident = conjugate_flow(&flow, &InvolutiveStateMap::identity());
    assert_eq!(ident.step(0.1, &y).unwrap(), flow.step(0.1, &y).unwrap());
    assert_eq!(once.declared_order(), 1);
}

#[test]
fn newton_inverse_matches_linear_solve() {
    let a = rot_generator();
    let f = euler(a.clone());
    let y1 = vec2(0.5, 2.0);
    let h = 0.2;
    let oracle = (DMatrix::identity(2, 2) + &a * h).lu().solve(&y1).unwrap();
    assert!((f.invert(h, &y1).unwrap() - oracle).amax() < 1e-12);
}

#[test]
fn newton_inverse_of_logistic_matches_quadratic_root() {
    let f = logistic();
    let h = 0.1;
    let y1 = DVector::from_vec(vec![0.3, 0.8]);
    let y0 = f.invert(h, &y1).unwrap();
    for i in 0..2 {
        // h y² − (1 + h) y + y₁ = 0, root near y₁
        let (a, b, c) = (h, -(1.0 + h), y1[i]);
        let root = (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
        assert!((y0[i] - root).abs() < 1e-12);
    }
}

#[test]
fn newton_failure_reports_residual() {
    let f = Flow::new("const", 1, |_, y: &State| Ok(y.map(|_| 1.0))).with_newton(1e-12, 5);
    match f.invert(0.1, &vec2(0.0, 0.0)) {
        Err(Error::NoConvergence { residual, .. }) => assert!(residual > 0.0),
        Err(Error::Singular) => {}
        other => panic!("expected failure, got {other:?}"),
    }
}

#[test]
fn thue_morse_words_match_table() {
    let p = Problem::linear_sym();
    let s = p.symmetry().unwrap();
    let expected = ["0", "01", "0110", "01101001"];
    for (k, want) in expected.iter().enumerate() {
        assert_eq!(thue_morse_pattern(k as u32, false), *want);
        let f = thue_morse(&p.lie_trotter(), s, k as u32, false);
        assert_eq!(f.word(), Some(*want));
        assert_eq!(f.period(), 1 << k);
        assert_eq!(f.base_evals(), 1 << k);
        let c = thue_morse(&p.lie_trotter(), s, k as u32, true);
        assert_eq!(c.word().unwrap(), thue_morse_pattern(k as u32, true));
    }
    assert_eq!(thue_morse_pattern(3, true), "10010110");
}

#[test]
fn thue_morse_sampling_rejects_mid_pattern() {
    let p = Problem::linear_sym();
    let s = p.symmetry().unwrap();
    let f = thue_morse(&p.lie_trotter(), s, 2, false);
    assert_eq!(
        symmetry_defect(&f, s, &p.y0, 0.1, 6, DefectMode::Symmetry),
        Err(Error::PeriodMismatch {
            n_steps: 6,
            period: 4
        })
    );
    assert!(symmetry_defect(&f, s, &p.y0, 0.1, 8, DefectMode::Symmetry).is_ok());
}

fn tm_slope(k: u32) -> f64 {
    let p = Problem::linear_sym();
    let s = p.symmetry().unwrap();
    let f = thue_morse(&p.lie_trotter(), s, k, false);
    let ladder: Vec<(f64, f64)> = (0..5)
        .map(|i| {
            let macros = 1usize << (i + 3);
            let h = p.t_end / macros as f64 / f64::from(1u32 << k);
            let d = symmetry_defect(&f, s, &p.y0, h, macros << k, DefectMode::Symmetry).unwrap();
            (h, d)
        })
        .collect();
    estimate_order(&ladder).unwrap().slope
}

#[test]
fn thue_morse_raises_symmetry_order_per_level() {
    for k in 0..4 {
        let slope = tm_slope(k);
        assert!((slope - (1 + k) as f64).abs() <= 0.3, "level {k}: {slope}");
    }
}

#[test]
fn exact_symmetric_flow_has_no_defect() {
    let p = Problem::linear_sym();
    let a = p.generator();
    let exact = Flow::linear("exact", 99, move |h| {
        crate::matcore::expm(&(&a * h)).unwrap()
    });
    let d = symmetry_defect(
        &exact,
        p.symmetry().unwrap(),
        &p.y0,
        0.1,
        10,
        DefectMode::Symmetry,
    )
    .unwrap();
    assert!(d < 1e-14);
}

#[test]
fn coefficient_identities() {
    for p in 1..=6u32 {
        let e = (2 * p + 1) as i32;
        let (a, b) = yoshida_coefficients(p);
        assert!((2.0 * a + b - 1.0).abs() <= 1e-15);
        // One ulp of α shifts 2α^e + β^e by up to ~1e-14 for large p, so the
        // power identity only holds to rounding relative to its terms.
        let scale = b.abs().powi(e);
        assert!((2.0 * a.powi(e) + b.powi(e)).abs() <= 1e-15 * scale);
        if p == 1 {
            assert!((2.0 * a.powi(e) + b.powi(e)).abs() <= 1e-15);
        }
        let (a, b) = symmetrize_coefficients(p);
        assert!(a > 0.0 && b > 0.0);
        assert!((2.0 * a + b - 1.0).abs() <= 1e-15);
        assert!((2.0 * a.powi(e) - b.powi(e)).abs() <= 1e-15);
    }
    let (a, b) = yoshida_coefficients(1);
    assert!((a - 1.351207).abs() < 1e-6 && (b + 1.702415).abs() < 1e-6);
    let (a, b) = symmetrize_coefficients(1);
    assert!((a - 0.306756).abs() < 1e-6 && (b - 0.386488).abs() < 1e-6);
    let (a, b) = symmetrize_coefficients(200);
    assert!((a - 1.0 / 3.0).abs() < 1e-2 && (b - 1.0 / 3.0).abs() < 1e-2);
}

fn global_ladder(flow: &Flow, p: &Problem, h0: f64, rungs: usize) -> Vec<(f64, f64)> {
    let exact = p.exact(p.t_end).unwrap();
    (0..rungs)
        .map(|i| {
            let n = ((p.t_end / h0).round() as usize) << i;
            let h = p.t_end / n as f64;
            let y = flow.run(h, &p.y0, n / flow.period()).unwrap();
            (h, (y - &exact).amax())
        })
        .collect()
}

#[test]
fn leapfrog_is_second_order() {
    let p = Problem::harmonic();
    let slope = estimate_order(&global_ladder(&p.strang(), &p, 0.1, 5))
        .unwrap()
        .slope;
    assert!((slope - 2.0).abs() <= 0.1, "{slope}");
}

#[test]
fn yoshida_on_cayley_is_fourth_order() {
    let p = Problem::harmonic();
    let f = yoshida(&p.cayley(), 1);
    assert_eq!(f.declared_order(), 4);
    let slope = estimate_order(&global_ladder(&f, &p, 0.1, 5))
        .unwrap()
        .slope;
    assert!((slope - 4.0).abs() <= 0.3, "{slope}");
}

#[test]
fn selfadjoint_symmetrization_orders() {
    let p = Problem::linear_sym();
    let s = p.symmetry().unwrap();
    let f = symmetrize_selfadjoint(&p.strang(), s, 1, 1);
    assert_eq!(f.base_evals(), 3);
    assert_eq!(
        symmetrize_selfadjoint(&p.strang(), s, 1, 3).base_evals(),
        27
    );
    let global = estimate_order(&global_ladder(&f, &p, 0.1, 5))
        .unwrap()
        .slope;
    assert!((global - 2.0).abs() <= 0.3, "{global}");
    // errors reach the rounding floor below h ≈ 0.02
    let sym: Vec<(f64, f64)> = (0..5)
        .map(|i| {
            let n = 2usize << i;
            let h = p.t_end / n as f64;
            (
                h,
                symmetry_defect(&f, s, &p.y0, h, n, DefectMode::Symmetry).unwrap(),
            )
        })
        .collect();
    let slope = estimate_order(&sym).unwrap().slope;
    assert!((slope - 4.0).abs() <= 0.3, "{slope}");
}

#[test]
fn reversing_symmetries_compose() {
    // both R₁ and R₂ reverse the rotation; so does R₁R₂⁻¹R₁
    let theta: f64 = 0.37;
    let m = DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
    let r1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let c = 0.8f64;
    let r2 = DMatrix::from_row_slice(
        2,
        2,
        &[
            (2.0 * c).cos(),
            (2.0 * c).sin(),
            (2.0 * c).sin(),
            -(2.0 * c).cos(),
        ],
    );
    let r3 = &r1 * r2.clone().try_inverse().unwrap() * &r1;
    let mm = m.clone();
    let flow = Flow::linear("rot", 2, move |_| mm.clone());
    let y = vec2(0.2, 1.1);
    for r in [r1, r2, r3] {
        let t = InvolutiveStateMap::linear("R", r);
        assert!(t.involution_defect(&[y.clone()]) < 1e-13);
        let d = symmetry_defect(&flow, &t, &y, 0.1, 1, DefectMode::Reversing).unwrap();
        assert!(d < 1e-11, "{d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inversion_round_trip(h in -0.2f64..0.2, a in -0.5f64..1.5, b in -0.5f64..1.5) {
        let y = vec2(a, b);
        for f in [euler(rot_generator()), logistic(), Problem::harmonic().strang()] {
            let back = f.invert(h, &f.step(h, &y).unwrap()).unwrap();
            prop_assert!((back - &y).amax() <= 1e-11);
        }
    }

    #[test]
    fn scovel_reversing_identity_for_any_base(
        h in 0.01f64..0.3, a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0,
    ) {
        let p = Problem::so3();
        let r = p.reversing().unwrap();
        let y0 = DVector::from_vec(vec![a, b, c]);
        let psi = scovel(&p.lie_trotter(), &Conjugation::State(r.clone()));
        let d = symmetry_defect(&psi, r, &y0, h, 3, DefectMode::Reversing).unwrap();
        prop_assert!(d <= 1e-12);
        let logi = scovel(&logistic(), &Conjugation::State(InvolutiveStateMap::linear(
            "swap", DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))));
        let swap = InvolutiveStateMap::linear("swap", DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let d = symmetry_defect(&logi, &swap, &vec2(0.3 * a, 0.3 * b), h, 1, DefectMode::Reversing).unwrap();
        prop_assert!(d <= 1e-11);
    }
}
