use eflab::testfn::{parse_literal, TestFunction};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn g0() -> TestFunction {
    TestFunction::real_bump(0.7, 0.6).unwrap()
}

// Values from an independent 30-digit adaptive quadrature.
const G0_MELLIN: [(f64, f64, f64, f64); 7] = [
    (0.0, 0.0, 0.26639628970084766269, 0.0),
    (1.0, 0.0, 0.55187832376656825846, 0.0),
    (0.5, 0.0, 0.38073085559725456079, 0.0),
    (0.5, 14.134725141734693, 0.0038253623083256630194, 0.0086184126672253971782),
    (0.3, 2.0, 0.039644239226842067663, 0.29085018766096251887),
    (0.5, 100.0, 0.000011528126474563651582, 0.000028109000192279568828),
    (0.5, 1000.0, 2.4206877942448865601e-13, -2.2885478530045219797e-13),
];

#[test]
fn mellin_matches_high_precision_oracle() {
    let g = g0();
    for &(sr, si, vr, vi) in &G0_MELLIN {
        let v = g.mellin(c(sr, si));
        assert!((v - c(vr, vi)).norm() <= 1e-12, "s = {sr}+{si}i: {v}");
    }
}

#[test]
fn transpose_and_reflection() {
    let g = g0().add(&TestFunction::bump(c(0.5, -2.0), -0.3, 0.25).unwrap()).unwrap();
    let s = c(0.3, 2.0);
    assert!((g.transpose().mellin(s) - g.mellin(1.0 - s)).norm() < 1e-12);
    for &u in &[0.5, 1.0, 1.7, 2.9] {
        let tt = g.transpose().transpose().evaluate(u).unwrap();
        assert!((tt - g.evaluate(u).unwrap()).norm() < 1e-15);
        let direct = g.evaluate(1.0 / u).unwrap() / u;
        assert!((g.transpose().evaluate(u).unwrap() - direct).norm() < 1e-14);
        assert!((g.conj_reflect().evaluate(u).unwrap() - direct.conj()).norm() < 1e-14);
    }
    let on_line = c(0.5, 3.0);
    let refl = g.conj_reflect().mellin(on_line);
    assert!((refl - g.mellin(on_line).conj()).norm() < 1e-12);
    let real = g0();
    assert_eq!(real.conj_reflect(), real.transpose());
    assert_eq!(g.conj_reflect().conj_reflect(), g);
}

#[test]
fn derivation_examples() {
    let g = g0();
    let dg = g.derivation_d().unwrap();
    assert!(dg.mellin(c(0.0, 0.0)).norm() < 1e-13);
    assert!((dg.mellin(c(1.0, 0.0)) - g.mellin(c(1.0, 0.0))).norm() < 1e-13);
    let h = 1e-6;
    for &u in &[0.8, 1.3, 2.0, 3.1] {
        let fd = (g.evaluate(u + h).unwrap() - g.evaluate(u - h).unwrap()) / (2.0 * h);
        let exact = dg.evaluate(u).unwrap();
        assert!((exact + fd * u).norm() < 1e-8, "u={u}");
    }
}

#[test]
fn convolution_examples() {
    let f = g0();
    let k = TestFunction::bump(c(1.0, 0.5), -0.2, 0.4).unwrap();
    let fk = f.mconvolve(&k).unwrap();
    let kf = k.mconvolve(&f).unwrap();
    for &s in &[c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.5, 14.1), c(0.2, -37.0), c(0.5, 50.0)] {
        let expected = f.mellin(s) * k.mellin(s);
        assert!((fk.mellin(s) - expected).norm() < 1e-9, "s={s}");
    }
    let (lo, hi) = fk.log_support().unwrap();
    assert!(lo >= 0.1 - 0.6 - 1e-12 && hi <= 1.3 + 0.2 + 1e-12);
    for i in 0..50 {
        let x = lo + (hi - lo) * i as f64 / 49.0;
        assert!((fk.log_value(x) - kf.log_value(x)).norm() < 1e-12);
    }
}

#[test]
fn autocorrelation_examples() {
    let g = TestFunction::bump(c(0.8, 0.6), 0.7, 0.6).unwrap();
    let h = g.autocorrelate().unwrap();
    let half = c(0.5, 0.0);
    assert!((h.mellin(half) - c(g.mellin(half).norm_sqr(), 0.0)).norm() < 1e-9);
    let v = h.mellin(c(0.5, 5.0));
    assert!(v.im.abs() < 1e-9 && v.re >= 0.0);
    let s = c(0.4, 1.0);
    let expected = g.mellin(s) * g.mellin(1.0 - s.conj()).conj();
    assert!((h.mellin(s) - expected).norm() < 1e-9);
}

#[test]
fn convolution_is_associative() {
    let a = TestFunction::real_bump(0.2, 0.5).unwrap();
    let b = TestFunction::real_bump(-0.4, 0.3).unwrap();
    let d = TestFunction::real_bump(0.9, 0.4).unwrap();
    let left = a.mconvolve(&b).unwrap().mconvolve(&d).unwrap();
    let right = a.mconvolve(&b.mconvolve(&d).unwrap()).unwrap();
    let (lo, hi) = left.log_support().unwrap();
    for i in 0..200 {
        let x = lo + (hi - lo) * i as f64 / 199.0;
        assert!((left.log_value(x) - right.log_value(x)).norm() < 1e-8, "x={x}");
    }
}

#[test]
fn mellin_decay_on_three_lines() {
    let g = g0();
    let weighted = |cx: f64, t: f64| g.mellin(c(cx, t)).norm() * (1.0 + t.abs()).powi(6);
    for &cx in &[0.0, 0.5, 1.0] {
        let inner = (0..=400)
            .map(|i| weighted(cx, -200.0 + i as f64))
            .fold(0.0, f64::max);
        assert!(inner.is_finite());
        // beyond the sampled window the weighted modulus stays below its sup
        for i in 0..=40 {
            let t = 200.0 + 10.0 * i as f64;
            assert!(weighted(cx, t) <= inner, "c={cx} t={t}");
        }
    }
}

#[test]
fn literal_round_trip() {
    let g = parse_literal("bump:mu=0.7,sigma=0.6").unwrap();
    assert_eq!(g, g0());
    assert!(parse_literal("step:X=4").unwrap().is_step());
}

fn strip_point() -> impl Strategy<Value = Complex64> {
    (0.01f64..0.99, -40.0f64..40.0).prop_map(|(a, b)| c(a, b))
}

fn random_bump() -> impl Strategy<Value = TestFunction> {
    (-1.0f64..1.0, 0.2f64..1.0, -2.0f64..2.0, -2.0f64..2.0)
        .prop_map(|(mu, sigma, re, im)| TestFunction::bump(c(re, im), mu, sigma).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn transpose_functional_equation(g in random_bump(), s in strip_point()) {
        let lhs = g.transpose().mellin(s);
        let rhs = g.mellin(1.0 - s);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn derivation_identity(g in random_bump(), s in strip_point()) {
        let lhs = g.derivation_d().unwrap().mellin(s);
        let rhs = s * g.mellin(s);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn reflection_pairs_on_the_line(g in random_bump(), t in -40.0f64..40.0) {
        let s = c(0.5, t);
        let lhs = g.conj_reflect().mellin(s);
        prop_assert!((lhs - g.mellin(s).conj()).norm() <= 1e-12);
    }
}
