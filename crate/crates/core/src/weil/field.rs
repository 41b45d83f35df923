//! The pointwise form `W_ν(g;y) = −log|y|_ν g(|y|_ν) + (G_ν ⋆ g_ν)(y)`.

use num_complex::Complex64;

use super::real::haran_real;
use crate::error::{Error, Result};
use crate::special::{FieldPoint, Place};
use crate::testfn::TestFunction;

/// `W_ν(g;y)`; at `|y|_ν = 1` this is `W_ν(g)`.
pub fn w_field(g: &TestFunction, place: Place, y: FieldPoint) -> Result<Complex64> {
    if g.is_step() {
        return Err(Error::Inadmissible {
            op: "pointwise Weil term",
            kind: g.kind().into(),
        });
    }
    let abs_y = y.abs(place)?;
    match place {
        Place::Real => {
            let local = g.evaluate(abs_y)? * -abs_y.ln();
            Ok(local + haran_real(g, abs_y)?)
        }
        Place::Prime(p) => {
            let FieldPoint::Padic { valuation } = y else {
                unreachable!("abs() rejects mismatched points");
            };
            let local = g.evaluate(abs_y)? * (valuation as f64 * (p as f64).ln());
            Ok(local + haran_prime(g, p, valuation))
        }
    }
}

/// `G_p(t ↦ g(|y − t|_p))` for `|y|_p = p^{−v}`, summed shell by shell:
/// `G_p(φ) = log p/(1 − 1/p) · [∫ (φ(t) − φ(0)·1_{|t|≤1}) dt/|t| + φ(0)/p]`.
pub fn haran_prime(g: &TestFunction, p: u64, valuation: i32) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let Some((a, b)) = g.log_support() else {
        return zero;
    };
    let pf = p as f64;
    let log_p = pf.ln();
    let at = |j: i32| g.evaluate(pf.powi(j)).expect("positive argument");
    let phi0 = at(-valuation);
    let shell = 1.0 - 1.0 / pf;
    let unit = i64::from(-valuation);

    // shells |t| = p^j with j > −v see g(p^j); past the support they vanish
    let top = ((b / log_p).floor() as i64 + 1).max(0);
    let mut total = zero;
    for j in (unit + 1)..=top {
        let mut avg = at(j as i32);
        if j <= 0 {
            avg -= phi0;
        }
        total += avg * shell;
    }

    // |t| = |y|: the units u = t/y with |1 − u| = p^{−m}
    let mut avg = phi0 * ((pf - 2.0) / (pf - 1.0));
    let mut m = 1;
    loop {
        let j = -valuation - m;
        if (j as f64) * log_p < a - 1e-12 {
            break;
        }
        avg += at(j) * pf.powi(-m);
        m += 1;
    }
    if unit <= 0 {
        avg -= phi0;
    }
    total += avg * shell;

    // |t| < |y| sees φ(0); only shells outside the unit ball survive
    let outside = (unit - 1).max(0);
    total += phi0 * (shell * outside as f64);

    (total + phi0 / pf) * (log_p / shell)
}
