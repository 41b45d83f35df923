//! The archimedean term `W_r(g)` by five independent routes.
//!
//! With `G(w) = g(e^w)` on the log axis:
//!
//! * finite: `V_r(g) + V_r(g^τ)`, `V_r(g) = (log π + γ)/2·G(0) + ∫_0^∞ G + ∫_0^∞ (G − G(0))/(e^{2w} − 1)`;
//! * series: the same kernel expanded as `Σ_j e^{−2jw}`, integrated term by term;
//! * pf: Weil's principal-part integral over `Q_r^×`, on the log axis;
//! * contour: `(1/2π) ∫ Λ_r(1/2 + it) ĝ(1/2 + it) dt`;
//! * convolution: `G_r(t ↦ g(|1 − t|))`, integrated in the additive variable `t`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::line::contour_term;
use crate::error::{Error, Result};
use crate::quadrature::{clip_breakpoints, integrate_panels, panels_from_breakpoints};
use crate::special::{Place, EULER_GAMMA};
use crate::testfn::TestFunction;

/// Below this `|w|` divided differences are replaced by their Taylor limits.
const REMOVABLE: f64 = 1e-4;
/// Number of kernel terms summed exactly in the series form.
const SERIES_TERMS: usize = 2000;
const WATSON_ORDER: usize = 5;

/// Route used for the archimedean term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealForm {
    Finite,
    Series,
    Pf,
    Contour,
    Convolution,
}

impl RealForm {
    pub const ALL: [RealForm; 5] = [
        RealForm::Finite,
        RealForm::Series,
        RealForm::Pf,
        RealForm::Contour,
        RealForm::Convolution,
    ];
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `W_r(g)` by the chosen route; steps admit only the finite closed form.
pub fn w_r(g: &TestFunction, form: RealForm) -> Result<Complex64> {
    if let TestFunction::Step(step) = g {
        if form != RealForm::Finite {
            return Err(Error::Inadmissible {
                op: "archimedean term (only the finite closed form applies)",
                kind: g.kind().into(),
            });
        }
        let x = step.cutoff;
        let value = (PI.ln() + EULER_GAMMA) / 2.0 + x.ln() + 0.5 * (-x.powi(-2)).ln_1p();
        return Ok(Complex64::new(value, 0.0));
    }
    match form {
        RealForm::Finite => Ok(finite_half(g)? + finite_half(&g.transpose())?),
        RealForm::Series => series(g),
        RealForm::Pf => pf(g),
        RealForm::Contour => contour_term(g, Place::Real, 0.5, 1.0),
        RealForm::Convolution => haran_real(g, 1.0),
    }
}

/// `G'(0), G''(0), G'''(0)`; splines stop at the second derivative.
fn taylor(g: &TestFunction) -> Result<[Complex64; 3]> {
    let d3 = if g.max_derivative() >= 3 {
        g.log_derivative(0.0, 3)?
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok([g.log_derivative(0.0, 1)?, g.log_derivative(0.0, 2)?, d3])
}

/// `(G(w) − G(0))/(1 − e^{−w})`, continued across `w = 0`.
fn divided_difference(g: &TestFunction, w: f64, g0: Complex64) -> Result<Complex64> {
    if w.abs() < REMOVABLE {
        let [d1, d2, d3] = taylor(g)?;
        return Ok(d1 + (d2 + d1) * (0.5 * w) + (d3 / 6.0 + d2 / 4.0 + d1 / 12.0) * (w * w));
    }
    Ok((g.log_value(w) - g0) / -(-w).exp_m1())
}

/// `∫_lo^hi f(w) dw` over panels adapted to `g`.
fn integrate<F>(g: &TestFunction, lo: f64, hi: f64, extra: &[f64], f: F) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut acc = zero();
    for p in g.log_panels(lo, hi, extra, 0.25) {
        for (w, weight) in p.points() {
            acc += f(w)? * weight;
        }
    }
    Ok(acc)
}

/// `V_r(g)` of the finite form.
fn finite_half(g: &TestFunction) -> Result<Complex64> {
    let g0 = g.log_value(0.0);
    let first = Complex64::new((PI.ln() + EULER_GAMMA) / 2.0, 0.0) * g0;
    let Some((_, b)) = g.log_support() else {
        return Ok(zero());
    };
    if b <= 0.0 {
        return Ok(first);
    }
    let mass = integrate(g, 0.0, b, &[], |w| Ok(g.log_value(w)))?;
    let kernel = integrate(g, 0.0, b, &[], |w| {
        if w < REMOVABLE {
            let [d1, d2, d3] = taylor(g)?;
            return Ok(d1 * 0.5 + (d2 * 0.25 - d1 * 0.5) * w
                + (d3 / 12.0 - d2 / 4.0 + d1 / 6.0) * (w * w));
        }
        Ok((g.log_value(w) - g0) / (2.0 * w).exp_m1())
    })?;
    // beyond the support: −G(0) ∫_b^∞ dw/(e^{2w} − 1)
    let tail = g0 * (0.5 * (-(-2.0 * b).exp()).ln_1p());
    Ok(first + mass + kernel + tail)
}

/// `ζ(s, a) = Σ_{n≥0} (n + a)^{−s}` for real `s > 1` and large `a`, by Euler–Maclaurin.
fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const B: [f64; 4] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut total = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    let mut rising = s;
    let mut factorial = 2.0;
    for (k, b) in B.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        total += b / factorial * rising * a.powf(-s - two_k + 1.0);
        rising *= (s + two_k - 1.0) * (s + two_k);
        factorial *= (two_k + 1.0) * (two_k + 2.0);
    }
    total
}

/// `Σ_{j≥1} ∫_0^∞ (G(w) − G(0)) e^{−2jw} dw`: the first terms by quadrature on
/// panels graded towards 0, the rest by Watson's lemma.
fn kernel_series(g: &TestFunction) -> Result<Complex64> {
    let Some((_, b)) = g.log_support() else {
        return Ok(zero());
    };
    if b <= 0.0 {
        return Ok(zero());
    }
    let g0 = g.log_value(0.0);
    let terms: Vec<Result<Complex64>> = (1..=SERIES_TERMS)
        .into_par_iter()
        .map(|j| {
            let jf = j as f64;
            let cut = 32.0 / jf;
            let grading: Vec<f64> = (0..8).map(|m| 0.25 * 2f64.powi(m) / jf).collect();
            let hi = b.min(cut);
            let mut value = integrate(g, 0.0, hi, &grading, |w| {
                Ok((g.log_value(w) - g0) * (-2.0 * jf * w).exp())
            })?;
            if b < cut {
                value -= g0 * ((-2.0 * jf * b).exp() / (2.0 * jf));
            }
            Ok(value)
        })
        .collect();
    let mut total = zero();
    for t in terms {
        total += t?;
    }
    let order = WATSON_ORDER.min(g.max_derivative());
    for n in 1..=order {
        let nf = n as f64;
        let zeta = hurwitz_zeta(nf + 1.0, SERIES_TERMS as f64 + 1.0);
        total += g.log_derivative(0.0, n)? * (2f64.powf(-nf - 1.0) * zeta);
    }
    Ok(total)
}

fn series(g: &TestFunction) -> Result<Complex64> {
    let gt = g.transpose();
    let g0 = g.log_value(0.0);
    let mut total = Complex64::new(PI.ln() + EULER_GAMMA, 0.0) * g0;
    for f in [g, &gt] {
        if let Some((_, b)) = f.log_support() {
            if b > 0.0 {
                total += integrate(f, 0.0, b, &[], |w| Ok(f.log_value(w)))?;
            }
        }
        total += kernel_series(f)?;
    }
    Ok(total)
}

/// Weil's form: `(log 2π + γ) g(1) + ∫_{x>1/2} (g(1/|x|) − g(1))/|1 − x| d^×x
/// + ∫_{x<1/2} g(1/|x|)/|1 − x| d^×x` with `d^×x = dx/(2|x|)`, written in
/// `w = −log|x|`.
fn pf(g: &TestFunction) -> Result<Complex64> {
    let g0 = g.log_value(0.0);
    let mut total = Complex64::new((2.0 * PI).ln() + EULER_GAMMA, 0.0) * g0;
    let Some((a, b)) = g.log_support() else {
        return Ok(zero());
    };
    // 1/2 < x < 1: w ∈ (0, log 2)
    if b > 0.0 {
        total += integrate(g, 0.0, LN_2, &[], |w| divided_difference(g, w, g0))? * 0.5;
    }
    // x > 1: w < 0, where (G − G(0))/(e^{−w} − 1) = −divided difference
    if a < 0.0 {
        total -= integrate(g, a, 0.0, &[], |w| divided_difference(g, w, g0))? * 0.5;
        total += g0 * (0.5 * (-a.exp()).ln_1p());
    }
    // 0 < x < 1/2: w > log 2
    if b > LN_2 {
        total += integrate(g, a.max(LN_2), b, &[], |w| {
            Ok(g.log_value(w) / -(-w).exp_m1())
        })? * 0.5;
    }
    // x < 0: |1 − x| = 1 + |x|
    total += integrate(g, a, b, &[], |w| Ok(g.log_value(w) / (1.0 + (-w).exp())))? * 0.5;
    Ok(total)
}

/// `G_r(t ↦ g(|y − t|))` for `y = abs_y > 0`, integrated in `t`:
/// `(log 2π + γ)φ(0) + ∫_{|t|≤1} (φ(t) − φ(0)) dt/(2|t|) + ∫_{|t|>1} φ(t) dt/(2|t|)`.
pub(crate) fn haran_real(g: &TestFunction, abs_y: f64) -> Result<Complex64> {
    let phi = |t: f64| {
        let r = (abs_y - t).abs();
        if r == 0.0 {
            zero()
        } else {
            g.log_value(r.ln())
        }
    };
    let phi0 = phi(0.0);
    let mut total = Complex64::new((2.0 * PI).ln() + EULER_GAMMA, 0.0) * phi0;
    let Some((a, b)) = g.log_support() else {
        return Ok(zero());
    };
    let (lo_r, hi_r) = (a.exp(), b.exp());
    let inside = |t: f64| {
        let r = (abs_y - t).abs();
        r > lo_r && r < hi_r
    };
    let (log_points, _, order) = g.quadrature_layout().expect("smooth function with support");
    let mut points = vec![-1.0, 0.0, 1.0, abs_y];
    for x in &log_points {
        let r = x.exp();
        points.push(abs_y - r);
        points.push(abs_y + r);
    }
    let lo = (-1.0f64).min(abs_y - hi_r);
    let hi = 1.0f64.max(abs_y + hi_r);
    let points = clip_breakpoints(points, lo, hi);
    for piece in points.windows(2) {
        let (t1, t2) = (piece[0], piece[1]);
        let near = t2 <= 1.0 && t1 >= -1.0;
        if !inside(0.5 * (t1 + t2)) {
            if near && phi0 != zero() {
                // φ ≡ 0 here: ∫ −φ(0) dt/(2|t|)
                total -= phi0 * (0.5 * (t2.abs() / t1.abs()).ln().abs());
            }
            continue;
        }
        let panels = panels_from_breakpoints(&[t1, t2], 0.02, order);
        total += if near {
            integrate_panels(&panels, |t| (phi(t) - phi0) / (2.0 * t.abs()))
        } else {
            integrate_panels(&panels, |t| phi(t) / (2.0 * t.abs()))
        };
    }
    Ok(total)
}
