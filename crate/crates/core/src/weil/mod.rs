//! Local Weil terms, the explicit-formula balance and its consequences.

mod field;
mod formula;
mod line;
mod real;
mod report;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{is_prime, Place};
use crate::testfn::TestFunction;

pub use field::{haran_prime, w_field};
pub use formula::{
    explicit_formula_check, positivity_q, reciprocal_modulus_sum, reciprocal_zero_sum,
    reciprocal_target, symmetry_shift, vonmangoldt_check, zero_side_sum, zero_tail_estimate, EFReport,
    PositivityReport, SymmetryReport,
};
pub use line::{contour_term, MellinLine, WEIL_LINE};
pub use real::{w_r, RealForm};
pub use report::{place_term_report, CsvRow, Method, MethodValue, PlaceTermReport};

/// Contour abscissa shared by every vertical-line route.
pub const CONTOUR_ABSCISSA: f64 = 0.5;

/// `log p · Σ_{k≥1} g(p^k)`, cut at the support.
pub fn v_p_sum(g: &TestFunction, p: u64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let Some((_, b)) = g.log_support() else {
        return total;
    };
    let log_p = (p as f64).ln();
    let mut k = 1;
    while k as f64 * log_p <= b + 1e-12 {
        let u = (p as f64).powi(k);
        // evaluate is total for u > 0
        total += g.evaluate(u).expect("prime powers are positive");
        k += 1;
    }
    total * log_p
}

/// `W_p(g) = V_p(g) + V_p(g^τ)`.
pub fn w_p(g: &TestFunction, p: u64) -> Complex64 {
    v_p_sum(g, p) + v_p_sum(&g.transpose(), p)
}

/// `W_p(g)` through the inverse Mellin integral of `Λ_p ĝ` on `Re s = c`.
pub fn w_p_contour(g: &TestFunction, p: u64, abscissa: f64) -> Result<Complex64> {
    contour_term(g, Place::prime(p)?, abscissa, 1.0)
}

/// Primes `p` for which some `p^{±k}`, `k ≥ 1`, lies in the support of `g`, ascending.
pub fn relevant_primes(g: &TestFunction) -> Vec<u64> {
    let Some((a, b)) = g.log_support() else {
        return Vec::new();
    };
    let reach = b.max(-a);
    if reach <= 0.0 {
        return Vec::new();
    }
    let limit = reach.exp().floor() as u64;
    (2..=limit)
        .filter(|&p| is_prime(p))
        .filter(|&p| {
            let log_p = (p as f64).ln();
            let hits = |lo: f64, hi: f64| {
                // some k ≥ 1 with k·log p in [lo, hi]
                let k = (lo / log_p).ceil().max(1.0);
                k * log_p <= hi
            };
            (b > 0.0 && hits(a.max(0.0), b)) || (a < 0.0 && hits((-b).max(0.0), -a))
        })
        .collect()
}

/// `W_ν(g)` at any place by the reference route: finite form or prime-power sum.
pub fn w_place(g: &TestFunction, place: Place) -> Result<Complex64> {
    match place {
        Place::Real => w_r(g, RealForm::Finite),
        Place::Prime(p) if is_prime(p) => Ok(w_p(g, p)),
        Place::Prime(p) => Err(Error::NotPrime(p)),
    }
}
