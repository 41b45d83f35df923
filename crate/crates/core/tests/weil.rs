use std::f64::consts::{LN_2, PI};

use eflab::special::{FieldPoint, Place, EULER_GAMMA};
use eflab::testfn::TestFunction;
use eflab::weil::*;
use eflab::zeta::{find_zeros, ZeroTable};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn g0() -> TestFunction {
    TestFunction::real_bump(0.7, 0.6).unwrap()
}

fn spread(values: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in values {
        for b in values {
            worst = worst.max((a - b).norm());
        }
    }
    worst
}

// 30-digit adaptive quadrature of the finite form, in an independent library.
const W_R_REFERENCE: [(f64, f64, f64); 2] = [
    (0.7, 0.6, 0.38368630328111701701),
    (0.1, 0.5, 0.48223595646020770458),
];

#[test]
fn real_term_matches_reference_by_every_form() {
    for &(mu, sigma, value) in &W_R_REFERENCE {
        let g = TestFunction::real_bump(mu, sigma).unwrap();
        let report = place_term_report(&g, Place::Real, &[]).unwrap();
        assert_eq!(report.admissible().count(), 5);
        for (method, v) in report.admissible() {
            let tol = if method == Method::Contour { 1e-9 } else { 1e-11 };
            assert!((v - c(value, 0.0)).norm() <= tol, "{method}: {v}");
        }
        assert!(report.spread() <= 1e-7);
    }
}

#[test]
fn five_forms_agree_for_complex_sums() {
    let g = g0()
        .add(&TestFunction::bump(c(0.3, -1.2), -0.4, 0.35).unwrap())
        .unwrap();
    let values: Vec<Complex64> = RealForm::ALL.iter().map(|&f| w_r(&g, f).unwrap()).collect();
    assert!(spread(&values) <= 1e-7, "{values:?}");
}

#[test]
fn step_closed_forms() {
    let step = TestFunction::step(4.0).unwrap();
    let expected = (PI.ln() + EULER_GAMMA) / 2.0 + 4f64.ln() + 0.5 * (15.0f64 / 16.0).ln();
    assert!((w_r(&step, RealForm::Finite).unwrap().re - expected).abs() <= 1e-12);
    assert!((expected - 2.21500).abs() < 5e-6);
    for form in [RealForm::Series, RealForm::Pf, RealForm::Contour, RealForm::Convolution] {
        assert!(w_r(&step, form).is_err(), "{form:?}");
    }

    let step10 = TestFunction::step(10.0).unwrap();
    assert!((v_p_sum(&step10, 2).re - 3.0 * LN_2).abs() < 1e-14);
    assert!((w_p(&step10, 2).re - 3.0 * LN_2).abs() < 1e-14);
    assert!(w_p_contour(&step10, 2, 0.5).is_err());
    let report = place_term_report(&step10, Place::Prime(2), &[]).unwrap();
    assert!((report.value(Method::Direct).unwrap().re - 3.0 * LN_2).abs() < 1e-14);
    assert!(report.value(Method::Contour).is_none());
}

#[test]
fn prime_power_sums() {
    // support (e^{-0.2}, e^{2.2}) ⊂ (0, 11)
    let g = TestFunction::real_bump(1.0, 1.2).unwrap();
    assert_eq!(v_p_sum(&g, 11), c(0.0, 0.0));

    let log3 = 3f64.ln();
    let single = TestFunction::real_bump(log3, 0.2).unwrap();
    let expected = single.evaluate(3.0).unwrap() * log3;
    assert!((v_p_sum(&single, 3) - expected).norm() < 1e-15);

    // covers 2 and 1/2 but neither 4 nor 1/4
    let both = TestFunction::real_bump(0.0, 0.9).unwrap();
    let expected = (both.evaluate(2.0).unwrap() + both.evaluate(0.5).unwrap() * 0.5) * LN_2;
    assert!((w_p(&both, 2) - expected).norm() < 1e-15);

    let symmetric = g0().add(&g0().transpose()).unwrap();
    assert!((w_p(&symmetric, 2) - v_p_sum(&symmetric, 2) * 2.0).norm() < 1e-14);

    assert_eq!(relevant_primes(&g0()), vec![2, 3]);
    assert!(relevant_primes(&TestFunction::real_bump(0.0, 0.5).unwrap()).is_empty());
}

#[test]
fn prime_routes_agree() {
    let corpus = [
        g0(),
        TestFunction::real_bump(0.1, 0.5).unwrap(),
        TestFunction::bump(c(0.5, 2.0), -0.8, 0.7).unwrap(),
    ];
    for g in &corpus {
        for p in [2, 3, 5, 7] {
            let report = place_term_report(g, Place::Prime(p), &[]).unwrap();
            let direct = report.value(Method::Direct).unwrap();
            let contour = report.value(Method::Contour).unwrap();
            let shells = report.value(Method::Convolution).unwrap();
            assert!((direct - contour).norm() <= 1e-6, "p={p}");
            assert!((direct - shells).norm() <= 1e-12, "p={p}");
        }
    }
    // no power of 5 in the support or its inverse
    let empty = TestFunction::real_bump(0.7, 0.6).unwrap();
    assert!(w_p_contour(&empty, 5, 0.5).unwrap().norm() <= 1e-8);
    assert!(w_p_contour(&empty, 5, 1.0).is_err());
}

#[test]
fn finite_form_away_from_one() {
    // support (e^{0.4}, e^{1.2}): g(1) = 0 and the transpose side vanishes
    let g = TestFunction::real_bump(0.8, 0.4).unwrap();
    let n = 20_000;
    let (a, b) = (0.4f64.exp(), 1.2f64.exp());
    let h = (b - a) / n as f64;
    // composite Simpson in the variable t
    let f = |t: f64| g.evaluate(t).unwrap().re * t / (t * t - 1.0);
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let t = a + h * i as f64;
        sum += f(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let direct = sum * h / 3.0;
    assert!((w_r(&g, RealForm::Finite).unwrap().re - direct).abs() < 1e-10);
}

#[test]
fn pointwise_terms() {
    let g = g0();
    // at |y| = 1 the pointwise form is the local term
    let at_one = w_field(&g, Place::Real, FieldPoint::Real(-1.0)).unwrap();
    assert!((at_one - w_r(&g, RealForm::Convolution).unwrap()).norm() < 1e-15);
    for v in [-2, -1, 0, 1, 3] {
        let at = w_field(&g, Place::Prime(2), FieldPoint::Padic { valuation: v }).unwrap();
        // W_p(g;y) = W_p(g(|y|·)): a shift of the log-axis centre
        let dilated = TestFunction::real_bump(0.7 + v as f64 * LN_2, 0.6).unwrap();
        assert!((at - w_p(&dilated, 2)).norm() < 1e-12, "v={v}");
    }
    for y in [0.5, 2.0, 3.0] {
        let direct = w_field(&g, Place::Real, FieldPoint::Real(y)).unwrap();
        let inverted = w_field(&g.transpose(), Place::Real, FieldPoint::Real(1.0 / y)).unwrap() / y;
        assert!((direct - inverted).norm() <= 1e-7, "y={y}");
        let dilated = TestFunction::real_bump(0.7 - y.ln(), 0.6).unwrap();
        assert!((direct - w_r(&dilated, RealForm::Finite).unwrap()).norm() <= 1e-7);
    }
    assert!(w_field(&g, Place::Real, FieldPoint::Real(0.0)).is_err());
}

#[test]
fn zero_side_sums() {
    let g = g0();
    let empty = ZeroTable::new(Vec::new(), 10.0, 1e-9).unwrap();
    let poles = g.mellin(c(0.0, 0.0)) + g.mellin(c(1.0, 0.0));
    assert_eq!(zero_side_sum(&g, &empty), poles);

    let zeros = find_zeros(100.0).unwrap();
    let x: f64 = 5.5;
    let step = TestFunction::step(x).unwrap();
    let mut expected = step.mellin(c(0.0, 0.0)) + step.mellin(c(1.0, 0.0));
    for &gamma in zeros.ordinates() {
        for rho in [c(0.5, gamma), c(0.5, -gamma)] {
            expected -= ((rho * x.ln()).exp() - 1.0) / rho;
        }
    }
    assert!((zero_side_sum(&step, &zeros) - expected).norm() < 1e-12);
}

#[test]
fn explicit_formula_balances() {
    let g = g0();
    let full = find_zeros(200.0).unwrap();
    let residual = |t: f64| {
        explicit_formula_check(&g, &full.truncate(t).unwrap())
            .unwrap()
            .residual
            .norm()
    };
    let (r50, r100, r200) = (residual(50.0), residual(100.0), residual(200.0));
    assert!(r100 <= 1e-4, "{r100}");
    assert!(r200 < r100 && r100 < r50);

    let zeros = full.truncate(100.0).unwrap();
    let report = explicit_formula_check(&g, &zeros).unwrap();
    assert_eq!(report.places.len(), 3);
    assert!(report.tail_estimate > 0.0);
    let a = c(0.3, -0.7);
    let scaled = explicit_formula_check(&g.scale(a).unwrap(), &zeros).unwrap();
    assert!((scaled.residual - report.residual * a).norm() <= 1e-10 * report.residual.norm().max(1.0));
    assert!(explicit_formula_check(&TestFunction::step(3.0).unwrap(), &zeros).is_err());
}

#[test]
fn von_mangoldt_formula() {
    let zeros = find_zeros(500.0).unwrap();
    let report = vonmangoldt_check(10.5, &zeros).unwrap();
    assert!(report.residual.norm() <= 0.1, "{:?}", report.residual);
    assert!(report.tail_estimate > report.residual.norm());
    // just above 1 the ψ side is empty while −½ log(1 − X^{−2}) diverges
    let near_one = vonmangoldt_check(1.0 + 1e-9, &zeros).unwrap();
    assert_eq!(near_one.prime_side.re, 0.0);
    assert!(near_one.zero_side.re > 8.0);
}

#[test]
fn reciprocal_sums() {
    let target = reciprocal_target();
    assert!((target - 0.0461914).abs() < 1e-7);
    let zeros = find_zeros(1000.0).unwrap();
    let short = zeros.truncate(100.0).unwrap();
    assert!((reciprocal_zero_sum(&short, true) - target).abs() <= 2e-2);
    assert!((reciprocal_zero_sum(&zeros, true) - target).abs() <= 3e-3);
    assert!(reciprocal_zero_sum(&zeros, false) < target);
    assert_eq!(reciprocal_modulus_sum(&zeros), reciprocal_zero_sum(&zeros, false));
}

#[test]
fn positivity_functional() {
    let zeros = find_zeros(100.0).unwrap();
    let null = positivity_q(&TestFunction::zero(), &zeros).unwrap();
    assert_eq!((null.prime_side_q, null.zero_side_q), (0.0, 0.0));

    let q = positivity_q(&g0(), &zeros).unwrap();
    assert!(q.prime_side_q >= -1e-6);
    assert!((q.prime_side_q - q.zero_side_q).abs() <= 1e-4 + q.tail_estimate);

    let rotated = positivity_q(&g0().scale(Complex64::from_polar(1.0, 0.9)).unwrap(), &zeros).unwrap();
    assert!((rotated.prime_side_q - q.prime_side_q).abs() < 1e-12);
    assert!((rotated.zero_side_q - q.zero_side_q).abs() < 1e-15);
}

#[test]
fn symmetry_under_rational_shifts() {
    let zeros = find_zeros(100.0).unwrap();
    let g = TestFunction::real_bump(0.2, 0.6).unwrap();
    for (num, den, places) in [(6, 1, 3), (5, 3, 3), (-6, 1, 3), (1, 1, 0)] {
        let report = symmetry_shift(&g, num, den, &zeros).unwrap();
        assert_eq!(report.shifts.len(), places);
        assert!(report.total_shift.norm() <= 1e-12);
        assert!((report.shifted_residual - report.residual).norm() <= 1e-10);
    }
    assert!(symmetry_shift(&g, 0, 1, &zeros).is_err());
}

#[test]
fn csv_rows() {
    let report = place_term_report(&TestFunction::step(4.0).unwrap(), Place::Real, &[]).unwrap();
    let rows = report.rows(1e-7);
    assert_eq!(rows.len(), 6);
    let mut out = Vec::new();
    CsvRow::write_all(&rows, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CsvRow::HEADER));
    assert!(lines.next().unwrap().starts_with("W_r,finite,2.21499787592657e0,0.00000000000000e0,1e-7,ok"));
    assert!(text.contains("W_r,series,,,1e-7,inadmissible"));
}

fn bump_strategy() -> impl Strategy<Value = TestFunction> {
    (-1.0f64..1.0, 0.2f64..0.8, -2.0f64..2.0, -2.0f64..2.0)
        .prop_map(|(mu, sigma, re, im)| TestFunction::bump(c(re, im), mu, sigma).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn local_terms_are_linear(f in bump_strategy(), g in bump_strategy(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let a = c(re, im);
        let sum = f.scale(a).unwrap().add(&g).unwrap();
        let scale = |x: Complex64, y: Complex64| (x.norm() + y.norm()).max(1.0);
        for form in [RealForm::Finite, RealForm::Pf, RealForm::Convolution] {
            let (wf, wg) = (w_r(&f, form).unwrap(), w_r(&g, form).unwrap());
            let err = (w_r(&sum, form).unwrap() - (wf * a + wg)).norm();
            prop_assert!(err <= 1e-10 * scale(wf * a, wg), "{:?}: {:e} {} {}", form, err, wf, wg);
        }
        for p in [2, 3] {
            let (wf, wg) = (w_p(&f, p), w_p(&g, p));
            prop_assert!((w_p(&sum, p) - (wf * a + wg)).norm() <= 1e-10 * scale(wf * a, wg));
        }
        let zeros = ZeroTable::new(vec![14.134725141734693, 21.022039638771555], 22.0, 1e-9).unwrap();
        let (zf, zg) = (zero_side_sum(&f, &zeros), zero_side_sum(&g, &zeros));
        prop_assert!((zero_side_sum(&sum, &zeros) - (zf * a + zg)).norm() <= 1e-10 * scale(zf * a, zg));
    }

    #[test]
    fn local_terms_are_transpose_invariant(g in bump_strategy()) {
        let gt = g.transpose();
        for form in [RealForm::Finite, RealForm::Series, RealForm::Pf, RealForm::Convolution] {
            prop_assert!((w_r(&g, form).unwrap() - w_r(&gt, form).unwrap()).norm() <= 1e-8, "{:?}", form);
        }
        for p in [2, 3, 5] {
            prop_assert!((w_p(&g, p) - w_p(&gt, p)).norm() <= 1e-8);
        }
    }
}
