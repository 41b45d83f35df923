//! Complex special functions and the local Gamma factors of the rationals.
//!
//! `log_gamma` and `digamma` raise the argument with the recurrence until
//! `|z| >= 10` and `Re z >= 0`, then use the Stirling series through `B_16`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_8;
const POLE_TOL: f64 = 1e-12;
const STIRLING_RADIUS: f64 = 10.0;

/// `B_{2k}` for k = 1..=8.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// A place of the rational field: the archimedean one or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn label(&self) -> String {
        match self {
            Place::Real => "r".to_string(),
            Place::Prime(p) => p.to_string(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A nonzero point of a completion, up to what radial functions can see.
///
/// At a prime only the valuation matters: `Padic { valuation: v }` stands
/// for any `y` with `|y|_p = p^{-v}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldPoint {
    Real(f64),
    Padic { valuation: i32 },
}

impl FieldPoint {
    /// `|y|_v` at the given place.
    pub fn abs(&self, place: Place) -> Result<f64> {
        match (*self, place) {
            (FieldPoint::Real(y), Place::Real) => {
                if y == 0.0 {
                    Err(Error::ZeroPoint)
                } else {
                    Ok(y.abs())
                }
            }
            (FieldPoint::Padic { valuation }, Place::Prime(p)) => {
                Ok((p as f64).powi(-valuation))
            }
            _ => Err(Error::InvalidArgument(format!(
                "field point {self:?} does not belong to place {place}"
            ))),
        }
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

fn check_gamma_pole(function: &'static str, s: Complex64) -> Result<()> {
    let nearest = s.re.round();
    if nearest <= 0.0 && (s - Complex64::new(nearest, 0.0)).norm() < POLE_TOL {
        return Err(Error::Pole {
            function,
            location: Complex64::new(nearest, 0.0),
        });
    }
    Ok(())
}

fn needs_shift(z: Complex64) -> bool {
    z.norm() < STIRLING_RADIUS || z.re < 0.0
}

/// `log Γ(s)` on the branch that is real on the positive axis and continuous off the non-positive reals.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    check_gamma_pole("log_gamma", s)?;
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while needs_shift(z) {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += power * (b / (two_k * (two_k - 1.0)));
        power *= inv2;
    }
    let stirling = (z - 0.5) * z.ln() - z + LN_2PI_HALF + series;
    Ok(stirling - shift)
}

/// `ψ(s) = Γ'(s)/Γ(s)`.
pub fn digamma(s: Complex64) -> Result<Complex64> {
    check_gamma_pole("digamma", s)?;
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while needs_shift(z) {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += power * (b / two_k);
        power *= inv2;
    }
    Ok(z.ln() - inv * 0.5 - series - shift)
}

fn prime_pole_distance(p: u64, s: Complex64) -> f64 {
    // poles of 1/(1 - p^{-s}) sit at 2πik / log p
    let period = 2.0 * PI / (p as f64).ln();
    let k = (s.im / period).round();
    (s - Complex64::new(0.0, k * period)).norm()
}

/// The local Gamma factor `Γ_v(s)` (ratio of local Euler factors at `s` and `1 - s`).
pub fn gamma_factor(place: Place, s: Complex64) -> Result<Complex64> {
    match place {
        Place::Real => {
            check_gamma_pole("gamma_factor", s * 0.5)?;
            let upper = (Complex64::new(1.0, 0.0) - s) * 0.5;
            if check_gamma_pole("gamma_factor", upper).is_err() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let log = (Complex64::new(0.5, 0.0) - s) * PI.ln() + log_gamma(s * 0.5)?
                - log_gamma(upper)?;
            Ok(log.exp())
        }
        Place::Prime(p) => {
            if prime_pole_distance(p, s) < POLE_TOL {
                return Err(Error::Pole {
                    function: "gamma_factor",
                    location: s,
                });
            }
            let pf = p as f64;
            let num = Complex64::new(1.0, 0.0) - (s - 1.0).expf(pf);
            let den = Complex64::new(1.0, 0.0) - (-s).expf(pf);
            Ok(num / den)
        }
    }
}

/// `Λ_v(s) = -Γ_v'(s)/Γ_v(s)` in the critical strip.
pub fn lambda_factor(place: Place, s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(Error::OutOfStrip {
            function: "lambda_factor",
            s,
        });
    }
    match place {
        Place::Real => {
            let one = Complex64::new(1.0, 0.0);
            Ok(Complex64::new(PI.ln(), 0.0)
                - digamma(s * 0.5)? * 0.5
                - digamma((one - s) * 0.5)? * 0.5)
        }
        Place::Prime(p) => {
            let pf = p as f64;
            let one = Complex64::new(1.0, 0.0);
            let a = (s - 1.0).expf(pf);
            let b = (-s).expf(pf);
            Ok((a / (one - a) + b / (one - b)) * pf.ln())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// ψ(x) = -γ + Σ_{k≥0} (1/(k+1) - 1/(k+x)), summed with an integral tail.
    fn digamma_series(x: f64) -> f64 {
        let n = 200_000usize;
        let mut acc = -EULER_GAMMA;
        for k in 0..n {
            let k = k as f64;
            acc += 1.0 / (k + 1.0) - 1.0 / (k + x);
        }
        // tail Σ_{k≥n} (1/(k+1) - 1/(k+x)) ≈ (x-1)/n
        acc + (x - 1.0) / n as f64
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half - c(0.5 * PI.ln(), 0.0)).norm() < 1e-14);
        let five = log_gamma(c(5.0, 0.0)).unwrap();
        assert!((five.re - 24f64.ln()).abs() < 1e-13 * 24f64.ln());
        assert!(five.im.abs() < 1e-15);
    }

    #[test]
    fn log_gamma_recurrence_and_reflection() {
        for &s in &[c(0.3, 2.0), c(0.25, 500.0), c(-3.7, 1.2), c(2.0, -40.0)] {
            let lhs = log_gamma(s + 1.0).unwrap();
            let rhs = log_gamma(s).unwrap() + s.ln();
            // equal modulo 2πi
            let d = lhs - rhs;
            let k = (d.im / (2.0 * PI)).round();
            assert!((d - c(0.0, 2.0 * PI * k)).norm() < 1e-11 * lhs.norm().max(1.0), "{s}");
        }
        // Γ(s)Γ(1-s) = π / sin(πs)
        let s = c(0.3, 0.7);
        let prod = (log_gamma(s).unwrap() + log_gamma(c(1.0, 0.0) - s).unwrap()).exp();
        let refl = PI / (s * PI).sin();
        assert!((prod - refl).norm() < 1e-13);
    }

    #[test]
    fn log_gamma_poles() {
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        assert!(log_gamma(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn digamma_values() {
        let one = digamma(c(1.0, 0.0)).unwrap();
        assert!((one.re - digamma_series(1.0)).abs() < 1e-9);
        assert!((one.re + EULER_GAMMA).abs() < 1e-14);
        let two = digamma(c(2.0, 0.0)).unwrap();
        assert!((two.re - (1.0 - EULER_GAMMA)).abs() < 1e-14);
        let half = digamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - (-EULER_GAMMA - 2.0 * 2f64.ln())).abs() < 1e-14);
        assert!((half.re - digamma_series(0.5)).abs() < 1e-9);
        assert!(matches!(digamma(c(-1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn digamma_is_log_gamma_derivative() {
        let h = 1e-5;
        for &s in &[c(0.3, 2.0), c(0.25, 40.0), c(3.5, -1.0)] {
            let fd = (log_gamma(s + h).unwrap() - log_gamma(s - h).unwrap()) / (2.0 * h);
            assert!((fd - digamma(s).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn gamma_factor_examples() {
        let r = gamma_factor(Place::Real, c(0.5, 0.0)).unwrap();
        assert!((r - c(1.0, 0.0)).norm() < 1e-14);
        let two = gamma_factor(Place::Prime(2), c(2.0, 0.0)).unwrap();
        assert!((two - c(-4.0 / 3.0, 0.0)).norm() < 1e-14);
        let three = gamma_factor(Place::Prime(3), c(0.5, 0.0)).unwrap();
        assert!((three - c(1.0, 0.0)).norm() < 1e-14);
        assert!(gamma_factor(Place::Real, c(-2.0, 0.0)).is_err());
        assert!(gamma_factor(Place::Prime(2), c(0.0, 2.0 * PI / 2f64.ln())).is_err());
        // (1-s)/2 at a pole: the factor vanishes
        assert!(gamma_factor(Place::Real, c(3.0, 0.0)).unwrap().norm() < 1e-300);
    }

    #[test]
    fn gamma_factor_functional_equation() {
        let places = [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(7)];
        for place in places {
            for &re in &[0.3, 0.5, 0.7] {
                for &im in &[-30.0, -2.5, 0.0, 1.0, 17.3, 200.0] {
                    let s = c(re, im);
                    let prod = gamma_factor(place, s).unwrap()
                        * gamma_factor(place, c(1.0, 0.0) - s).unwrap();
                    assert!((prod - c(1.0, 0.0)).norm() < 1e-10, "{place} {s}");
                }
            }
        }
    }

    #[test]
    fn lambda_factor_examples() {
        let l2 = lambda_factor(Place::Prime(2), c(0.5, 0.0)).unwrap();
        let r = 2f64.powf(-0.5);
        let expected = 2.0 * 2f64.ln() * r / (1.0 - r);
        assert!((l2.re - expected).abs() < 1e-14);
        assert!((l2.re - 3.346_810_648_057).abs() < 1e-11);
        let lr = lambda_factor(Place::Real, c(0.5, 0.0)).unwrap();
        let expected = PI.ln() + EULER_GAMMA + 3.0 * 2f64.ln() + PI / 2.0;
        assert!((lr.re - expected).abs() < 1e-13);
        assert!((lr.re - 5.37218).abs() < 1e-5);
        assert!(matches!(
            lambda_factor(Place::Real, c(1.2, 0.0)),
            Err(Error::OutOfStrip { .. })
        ));
    }

    #[test]
    fn lambda_factor_symmetry_and_derivative() {
        let h = 1e-5;
        for place in [Place::Real, Place::Prime(2), Place::Prime(5)] {
            for &s in &[c(0.3, 1.0), c(0.5, 14.0), c(0.7, -3.0)] {
                let l = lambda_factor(place, s).unwrap();
                let refl = lambda_factor(place, c(1.0, 0.0) - s).unwrap();
                assert!((l - refl).norm() < 1e-10);
                let fd = -(gamma_factor(place, s + h).unwrap().ln()
                    - gamma_factor(place, s - h).unwrap().ln())
                    / (2.0 * h);
                assert!((fd - l).norm() < 1e-6, "{place} {s}: {fd} vs {l}");
            }
        }
    }

    #[test]
    fn prime_lambda_periodic_and_expansion() {
        for p in [2u64, 3, 11] {
            let period = 2.0 * PI / (p as f64).ln();
            let s = c(0.4, 1.3);
            let a = lambda_factor(Place::Prime(p), s).unwrap();
            let b = lambda_factor(Place::Prime(p), s + c(0.0, 3.0 * period)).unwrap();
            assert!((a - b).norm() < 1e-12);
            // Λ_p(s) = log p Σ_k (p^{-ks} + p^{-k(1-s)})
            let lp = (p as f64).ln();
            let mut partial = c(0.0, 0.0);
            let (r1, r2) = ((p as f64).powf(-0.4), (p as f64).powf(-0.6));
            let mut err = f64::INFINITY;
            for k in 1..=120 {
                let kf = k as f64;
                partial += ((-s * kf).expf(p as f64) + ((s - 1.0) * kf).expf(p as f64)) * lp;
                err = (partial - a).norm();
                let tail = lp * (r1.powi(k + 1) / (1.0 - r1) + r2.powi(k + 1) / (1.0 - r2));
                assert!(err <= tail + 1e-14, "p={p} k={k}");
            }
            assert!(err < 1e-10);
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(Place::prime(9).is_err());
        assert!(is_prime(1_000_003));
    }
}
