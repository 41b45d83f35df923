//! Both sides of the explicit formula and the identities built on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{relevant_primes, w_p, w_r, RealForm};
use crate::error::{Error, Result};
use crate::quadrature::Panel;
use crate::special::{Place, EULER_GAMMA};
use crate::testfn::TestFunction;
use crate::zeta::{psi_sum, ZeroTable};

/// Balance of `ĝ(0) + ĝ(1) − Σ_ρ ĝ(ρ)` against `Σ_ν W_ν(g)`.
#[derive(Debug, Clone)]
pub struct EFReport {
    pub zero_side: Complex64,
    pub prime_side: Complex64,
    pub residual: Complex64,
    pub t_max: f64,
    /// Estimated size of the omitted zeros `|γ| > t_max`.
    pub tail_estimate: f64,
    /// Local terms in ascending place order.
    pub places: Vec<(Place, Complex64)>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn on_line(gamma: f64) -> Complex64 {
    Complex64::new(0.5, gamma)
}

/// `ĝ(0) + ĝ(1) − Σ_{γ ≤ t_max} [ĝ(1/2 + iγ) + ĝ(1/2 − iγ)]`, summed in ascending `γ`.
pub fn zero_side_sum(g: &TestFunction, zeros: &ZeroTable) -> Complex64 {
    let terms: Vec<Complex64> = zeros
        .ordinates()
        .par_iter()
        .map(|&gamma| g.mellin(on_line(gamma)) + g.mellin(on_line(-gamma)))
        .collect();
    let poles = g.mellin(zero()) + g.mellin(Complex64::new(1.0, 0.0));
    terms.into_iter().fold(poles, |acc, t| acc - t)
}

/// `∫_T^∞ (1/π) log⁺(t/2π) (1 + t)^{−3} dt`: the paired zero density against a cubic decay.
fn density_moment(t_max: f64) -> f64 {
    let start = t_max.max(2.0 * PI);
    let mut total = 0.0;
    let mut a = start;
    // doubling panels until the remainder is negligible
    while a < start * 1e12 {
        let b = 2.0 * a;
        let panel = Panel::new(a, b, 20);
        total += panel
            .integrate(|t| Complex64::new((t / (2.0 * PI)).ln() / PI / (1.0 + t).powi(3), 0.0))
            .re;
        a = b;
    }
    total
}

/// Bound on the zeros beyond `t_max`: `sup_{t ≥ T} |ĝ(1/2 ± it)|(1 + t)³` (sampled)
/// times the density moment.
pub fn zero_tail_estimate(g: &TestFunction, t_max: f64) -> f64 {
    let samples: Vec<f64> = (0..=400)
        .into_par_iter()
        .map(|k| {
            let t = t_max + 0.5 * k as f64;
            let decay = (1.0 + t).powi(3);
            g.mellin(on_line(t)).norm().max(g.mellin(on_line(-t)).norm()) * decay
        })
        .collect();
    let sup = samples.into_iter().fold(0.0, f64::max);
    sup * density_moment(t_max)
}

/// Local terms `W_r(g)` (finite form) and `W_p(g)` over the relevant primes.
fn local_terms(g: &TestFunction) -> Result<Vec<(Place, Complex64)>> {
    let mut places = vec![(Place::Real, w_r(g, RealForm::Finite)?)];
    places.extend(relevant_primes(g).into_iter().map(|p| (Place::Prime(p), w_p(g, p))));
    Ok(places)
}

/// Residual of the explicit formula with zeros to the table height.
pub fn explicit_formula_check(g: &TestFunction, zeros: &ZeroTable) -> Result<EFReport> {
    if g.is_step() {
        return Err(Error::Inadmissible {
            op: "explicit formula check (use the von Mangoldt check)",
            kind: g.kind().into(),
        });
    }
    zeros.certify()?;
    let zero_side = zero_side_sum(g, zeros);
    let places = local_terms(g)?;
    let prime_side = places.iter().map(|(_, w)| w).sum();
    Ok(EFReport {
        zero_side,
        prime_side,
        residual: zero_side - prime_side,
        t_max: zeros.t_max(),
        tail_estimate: zero_tail_estimate(g, zeros.t_max()),
        places,
    })
}

/// `Σ_{n<X} Λ(n) + ½Λ(X)` against `X − Σ_ρ X^ρ/ρ − log 2π − ½ log(1 − X^{−2})`.
///
/// `prime_side` holds the ψ side, `zero_side` the truncated zero side. The tail
/// estimate `X/(π T δ)`, with `δ` the distance from `X` to the nearest integer,
/// is heuristic: the zero sum converges only conditionally.
pub fn vonmangoldt_check(x: f64, zeros: &ZeroTable) -> Result<EFReport> {
    if !(x > 1.0) {
        return Err(Error::InvalidArgument(format!("X must exceed 1, got {x}")));
    }
    let psi = psi_sum(x)?;
    let log_x = x.ln();
    let terms: Vec<f64> = zeros
        .ordinates()
        .par_iter()
        .map(|&gamma| {
            let rho = on_line(gamma);
            2.0 * ((rho * log_x).exp() / rho).re
        })
        .collect();
    let oscillation: f64 = terms.into_iter().sum();
    let right = x - oscillation - (2.0 * PI).ln() - 0.5 * (-x.powi(-2)).ln_1p();
    let delta = (x - x.round()).abs().max(1e-3);
    let t_max = zeros.t_max();
    Ok(EFReport {
        zero_side: Complex64::new(right, 0.0),
        prime_side: Complex64::new(psi, 0.0),
        residual: Complex64::new(right - psi, 0.0),
        t_max,
        tail_estimate: x / (PI * t_max * delta),
        places: Vec::new(),
    })
}

/// `Σ_ρ 1/(ρ(1 − ρ)) = 2 Σ_{γ ≤ T} 1/(1/4 + γ²)`, optionally plus
/// `∫_T^∞ log(t/2π)/(π t²) dt = (log(T/2π) + 1)/(π T)`.
pub fn reciprocal_zero_sum(zeros: &ZeroTable, with_tail: bool) -> f64 {
    let partial: f64 = zeros.ordinates().iter().map(|g| 2.0 / (0.25 + g * g)).sum();
    if !with_tail {
        return partial;
    }
    let t = zeros.t_max();
    partial + ((t / (2.0 * PI)).ln() + 1.0) / (PI * t)
}

/// `Σ_ρ 1/|ρ|²` over the table; equal to the unregularised reciprocal sum on the line.
pub fn reciprocal_modulus_sum(zeros: &ZeroTable) -> f64 {
    zeros
        .ordinates()
        .iter()
        .map(|&g| 2.0 / on_line(g).norm_sqr())
        .sum()
}

/// The constant `2 + γ − log 4π`.
pub fn reciprocal_target() -> f64 {
    2.0 + EULER_GAMMA - (4.0 * PI).ln()
}

/// Both sides of the positivity functional for `h = g ⋆ g^c`.
#[derive(Debug, Clone, Copy)]
pub struct PositivityReport {
    /// `Re[ĥ(0) + ĥ(1) − Σ_ν W_ν(h)]`.
    pub prime_side_q: f64,
    /// `Σ_{γ ≤ T} |ĝ(1/2 + iγ)|² + |ĝ(1/2 − iγ)|²`.
    pub zero_side_q: f64,
    pub tail_estimate: f64,
}

pub fn positivity_q(g: &TestFunction, zeros: &ZeroTable) -> Result<PositivityReport> {
    if g.components().is_empty() && !g.is_step() {
        return Ok(PositivityReport {
            prime_side_q: 0.0,
            zero_side_q: 0.0,
            tail_estimate: 0.0,
        });
    }
    let h = g.autocorrelate()?;
    let poles = h.mellin(zero()) + h.mellin(Complex64::new(1.0, 0.0));
    let local: Complex64 = local_terms(&h)?.iter().map(|(_, w)| w).sum();
    let squares: Vec<f64> = zeros
        .ordinates()
        .par_iter()
        .map(|&gamma| g.mellin(on_line(gamma)).norm_sqr() + g.mellin(on_line(-gamma)).norm_sqr())
        .collect();
    Ok(PositivityReport {
        prime_side_q: (poles - local).re,
        zero_side_q: squares.into_iter().sum(),
        tail_estimate: zero_tail_estimate(&h, zeros.t_max()),
    })
}

/// The `q`-shifted local terms `W_ν(g) + log|q|_ν g(1)`.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    /// `Σ_ν log|q|_ν · g(1)`; zero by the product formula.
    pub total_shift: Complex64,
    /// Places with `log|q|_ν ≠ 0`, real place first.
    pub shifts: Vec<(Place, Complex64)>,
    pub residual: Complex64,
    pub shifted_residual: Complex64,
}

fn factor(mut n: u64) -> Vec<(u64, i32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Shift by `q = numerator/denominator` and rerun the balance.
pub fn symmetry_shift(
    g: &TestFunction,
    numerator: i64,
    denominator: u64,
    zeros: &ZeroTable,
) -> Result<SymmetryReport> {
    if numerator == 0 || denominator == 0 {
        return Err(Error::InvalidArgument("q must be a nonzero rational".into()));
    }
    let g1 = g.evaluate(1.0)?;
    let num = numerator.unsigned_abs();
    let mut valuations: Vec<(u64, i32)> = factor(num);
    for (p, e) in factor(denominator) {
        match valuations.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 -= e,
            None => valuations.push((p, -e)),
        }
    }
    valuations.retain(|&(_, e)| e != 0);
    valuations.sort();
    let mut shifts = Vec::new();
    let log_q = (num as f64).ln() - (denominator as f64).ln();
    if log_q != 0.0 {
        shifts.push((Place::Real, g1 * log_q));
    }
    for &(p, e) in &valuations {
        // |q|_p = p^{−v_p(q)}
        shifts.push((Place::Prime(p), g1 * (-(e as f64) * (p as f64).ln())));
    }
    let total_shift = shifts.iter().map(|(_, s)| s).sum();

    let report = explicit_formula_check(g, zeros)?;
    let mut shifted: Vec<(Place, Complex64)> = report.places.clone();
    for &(place, s) in &shifts {
        match shifted.iter_mut().find(|(q, _)| *q == place) {
            Some(entry) => entry.1 += s,
            None => shifted.push((place, s)),
        }
    }
    shifted.sort_by_key(|(place, _)| *place);
    let shifted_prime: Complex64 = shifted.iter().map(|(_, w)| w).sum();
    Ok(SymmetryReport {
        total_shift,
        shifts,
        residual: report.residual,
        shifted_residual: report.zero_side - shifted_prime,
    })
}
