//! Gauss–Legendre panels and the vertical-line engine used for every
//! contour integral `(1/2πi) ∫_{Re s = 1/2} F(s) ds`.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone)]
pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_rule(n: usize) -> GlRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GlRule { nodes, weights }
}

/// Gauss–Legendre rule of order `n` on `[-1, 1]`, `1 <= n <= 64`.
pub fn gauss_legendre(n: usize) -> &'static GlRule {
    static RULES: OnceLock<Vec<GlRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| (1..=MAX_ORDER).map(legendre_rule).collect());
    &rules[n.clamp(1, MAX_ORDER) - 1]
}

/// An interval integrated with one Gauss–Legendre rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub order: usize,
}

impl Panel {
    pub fn new(a: f64, b: f64, order: usize) -> Self {
        Self { a, b, order }
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        let rule = gauss_legendre(self.order);
        let mid = 0.5 * (self.a + self.b);
        let half = 0.5 * (self.b - self.a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    /// Nodes and already-scaled weights.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let rule = gauss_legendre(self.order);
        let mid = 0.5 * (self.a + self.b);
        let half = 0.5 * (self.b - self.a);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }
}

/// Sorted, de-duplicated breakpoints restricted to `[lo, hi]` (both included).
pub fn clip_breakpoints(mut points: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    points.retain(|x| x.is_finite() && *x > lo && *x < hi);
    points.push(lo);
    points.push(hi);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(1.0));
    points
}

/// Panels over consecutive breakpoints, each split until no wider than `max_width`.
pub fn panels_from_breakpoints(points: &[f64], max_width: f64, order: usize) -> Vec<Panel> {
    let mut out = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
        let h = (b - a) / pieces as f64;
        for k in 0..pieces {
            let lo = a + h * k as f64;
            let hi = if k + 1 == pieces { b } else { lo + h };
            out.push(Panel::new(lo, hi, order));
        }
    }
    out
}

pub fn integrate_panels<F: FnMut(f64) -> Complex64>(panels: &[Panel], mut f: F) -> Complex64 {
    panels.iter().map(|p| p.integrate(&mut f)).sum()
}

/// Settings of the vertical-line engine.
#[derive(Debug, Clone, Copy)]
pub struct LineSettings {
    pub block: f64,
    pub tolerance: f64,
    pub cap: f64,
    pub panels_per_block: usize,
    pub order: usize,
}

impl Default for LineSettings {
    fn default() -> Self {
        Self {
            block: 20.0,
            tolerance: 1e-10,
            cap: 2000.0,
            panels_per_block: 8,
            order: 16,
        }
    }
}

/// `∫_{-∞}^{∞} f(t) dt` for integrands decaying along a vertical line.
///
/// Blocks of `[kΔ, (k+1)Δ]` (combined with their mirror) are added until two
/// consecutive blocks each contribute less than the tolerance. Nodes inside a
/// block are evaluated in parallel and reduced in a fixed order.
pub fn line_integral<F>(f: F, settings: LineSettings) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let mut total = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    let mut k = 0usize;
    loop {
        let a = settings.block * k as f64;
        if a >= settings.cap {
            return Err(Error::NonConvergence {
                what: "vertical-line integral",
                reached: a,
            });
        }
        let b = a + settings.block;
        let block = block_integral(&f, a, b, &settings)?;
        total += block;
        if block.norm() < settings.tolerance {
            quiet += 1;
            if quiet >= 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        k += 1;
    }
}

fn block_integral<F>(f: &F, a: f64, b: f64, settings: &LineSettings) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let panels =
        panels_from_breakpoints(&[a, b], (b - a) / settings.panels_per_block as f64, settings.order);
    let points: Vec<(f64, f64)> = panels.iter().flat_map(|p| p.points().collect::<Vec<_>>()).collect();
    let values: Vec<Result<Complex64>> = points
        .par_iter()
        .map(|&(t, w)| Ok((f(t)? + f(-t)?) * w))
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for v in values {
        acc += v?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 20, 64] {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "order {n}");
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 1 { 2.0 / deg as f64 } else { 0.0 };
            // x^{2n-2} is even: ∫ = 2/(2n-1)
            let even: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(deg as i32 - 1))
                .sum();
            assert!((even - exact).abs() < 1e-12, "order {n}: {even} vs {exact}");
        }
    }

    #[test]
    fn panels_cover_interval() {
        let pts = clip_breakpoints(vec![0.3, -5.0, 0.3, 0.7, 9.0], 0.0, 1.0);
        assert_eq!(pts, vec![0.0, 0.3, 0.7, 1.0]);
        let panels = panels_from_breakpoints(&pts, 0.1, 8);
        let len: f64 = panels.iter().map(|p| p.b - p.a).sum();
        assert!((len - 1.0).abs() < 1e-15);
        assert!(panels.iter().all(|p| p.b - p.a <= 0.1 + 1e-15));
        let val = integrate_panels(&panels, |x| Complex64::new(x.exp(), 0.0));
        assert!((val.re - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn line_engine_gaussian() {
        let v = line_integral(
            |t| Ok(Complex64::new((-t * t / 50.0).exp(), 0.0)),
            LineSettings::default(),
        )
        .unwrap();
        assert!((v.re - (50.0 * std::f64::consts::PI).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn line_engine_reports_nonconvergence() {
        let r = line_integral(|_| Ok(Complex64::new(1.0, 0.0)), LineSettings::default());
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
