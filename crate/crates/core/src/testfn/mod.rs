//! Test functions on the positive half-line.
//!
//! Smooth functions are finite sums of components on the log axis `x = log u`:
//! shifted bump kernels and spline-sampled convolution products. The von
//! Mangoldt step function is kept separate and only supports closed forms.

mod bump;
mod grid;
mod parse;

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{clip_breakpoints, panels_from_breakpoints, Panel};

pub use bump::{kernel_derivative, BumpTerm, MAX_DERIVATIVE};
pub use grid::LogGrid;
pub use parse::parse_literal;

/// Default log-grid spacing of convolution products.
pub const DEFAULT_SPACING: f64 = 1.0 / 512.0;

const BUMP_ORDER: usize = 20;
const GRID_ORDER: usize = 6;

/// A summand of a smooth test function, as a function of `x = log u`.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Bump(BumpTerm),
    Grid(Arc<LogGrid>),
}

impl Component {
    pub fn log_support(&self) -> (f64, f64) {
        match self {
            Component::Bump(b) => b.support(),
            Component::Grid(g) => g.support(),
        }
    }

    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            Component::Bump(b) => b.value(x),
            Component::Grid(g) => g.value(x),
        }
    }

    /// `n`-th log-axis derivative, `None` where the representation is not smooth enough.
    pub fn derivative(&self, x: f64, n: usize) -> Option<Complex64> {
        match self {
            Component::Bump(b) => Some(b.derivative(x, n)),
            Component::Grid(g) => g.derivative(x, n),
        }
    }

    pub fn max_derivative(&self) -> usize {
        match self {
            Component::Bump(b) => MAX_DERIVATIVE - b.order,
            Component::Grid(_) => 2,
        }
    }

    fn transpose(&self) -> Self {
        match self {
            Component::Bump(b) => Component::Bump(b.transpose()),
            Component::Grid(g) => Component::Grid(Arc::new(g.transpose())),
        }
    }

    fn conj(&self) -> Self {
        match self {
            Component::Bump(b) => Component::Bump(BumpTerm {
                amp: b.amp.conj(),
                ..*b
            }),
            Component::Grid(g) => Component::Grid(Arc::new(g.conj())),
        }
    }

    fn scale(&self, a: Complex64) -> Self {
        match self {
            Component::Bump(b) => Component::Bump(BumpTerm { amp: b.amp * a, ..*b }),
            Component::Grid(g) => Component::Grid(Arc::new(g.scale(a))),
        }
    }

    /// Breakpoints, panel width and rule order after which the component is
    /// smooth on every panel.
    fn quadrature_layout(&self) -> (Vec<f64>, f64, usize) {
        match self {
            Component::Bump(b) => (b.breakpoints(), b.max_panel_width(), BUMP_ORDER),
            Component::Grid(g) => (g.breakpoints(), g.step(), GRID_ORDER),
        }
    }

    fn panels(&self, extra_width: f64) -> Vec<Panel> {
        let (points, width, order) = self.quadrature_layout();
        panels_from_breakpoints(&points, width.min(extra_width), order)
    }

    /// `∫ value(x) e^{s x} dx`.
    fn mellin(&self, s: Complex64) -> Complex64 {
        if let Component::Bump(b) = self {
            return b.integrate(s.im.abs(), |x| (s * x).exp());
        }
        let oscillation = if s.im == 0.0 { f64::INFINITY } else { 8.0 / s.im.abs() };
        self.panels(oscillation)
            .iter()
            .map(|p| p.integrate(|x| self.value(x) * (s * x).exp()))
            .sum()
    }
}

/// The indicator of `(1, X)` with midpoint values at the jumps, or its transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepFunction {
    pub cutoff: f64,
    pub transposed: bool,
}

impl StepFunction {
    fn base_value(&self, u: f64) -> f64 {
        let x = self.cutoff;
        if u == 1.0 || u == x {
            0.5
        } else if u > 1.0 && u < x {
            1.0
        } else {
            0.0
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        if self.transposed {
            self.base_value(1.0 / u) / u
        } else {
            self.base_value(u)
        }
    }

    /// `(X^s − 1)/s`, continued to `log X` at `s = 0`; the transpose uses `1 − s`.
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        let s = if self.transposed { 1.0 - s } else { s };
        let log_x = self.cutoff.ln();
        let z = s * log_x;
        if z.norm() < 1e-3 {
            // (e^z − 1)/z = Σ z^n/(n+1)!
            let mut term = Complex64::new(1.0, 0.0);
            let mut acc = term;
            for n in 1..8 {
                term *= z / (n as f64 + 1.0);
                acc += term;
            }
            acc * log_x
        } else {
            (z.exp() - 1.0) / s
        }
    }

    pub fn support(&self) -> (f64, f64) {
        if self.transposed {
            (1.0 / self.cutoff, 1.0)
        } else {
            (1.0, self.cutoff)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    Smooth(Vec<Component>),
    Step(StepFunction),
}

impl TestFunction {
    /// The zero function.
    pub fn zero() -> Self {
        TestFunction::Smooth(Vec::new())
    }

    /// `u ↦ amp · B((log u − center)/halfwidth)`.
    pub fn bump(amp: Complex64, center: f64, halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0 && halfwidth.is_finite() && center.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bump needs finite center and positive halfwidth, got ({center}, {halfwidth})"
            )));
        }
        Ok(TestFunction::Smooth(vec![Component::Bump(BumpTerm::new(
            amp, center, halfwidth,
        ))]))
    }

    /// Real bump of unit amplitude.
    pub fn real_bump(center: f64, halfwidth: f64) -> Result<Self> {
        Self::bump(Complex64::new(1.0, 0.0), center, halfwidth)
    }

    /// The indicator of `(1, X)`, `X > 1`.
    pub fn step(cutoff: f64) -> Result<Self> {
        if !(cutoff > 1.0 && cutoff.is_finite()) {
            return Err(Error::InvalidArgument(format!("step cutoff must exceed 1, got {cutoff}")));
        }
        Ok(TestFunction::Step(StepFunction {
            cutoff,
            transposed: false,
        }))
    }

    pub fn is_step(&self) -> bool {
        matches!(self, TestFunction::Step(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TestFunction::Smooth(_) => "smooth compactly supported function",
            TestFunction::Step(_) => "step function",
        }
    }

    /// Whether `g` is real-valued, so that `ĝ(s̄) = conj ĝ(s)`.
    pub fn is_real(&self) -> bool {
        match self {
            TestFunction::Step(_) => true,
            TestFunction::Smooth(c) => c.iter().all(|c| match c {
                Component::Bump(b) => b.amp.im == 0.0,
                Component::Grid(g) => g.samples().iter().all(|v| v.im == 0.0),
            }),
        }
    }

    pub fn components(&self) -> &[Component] {
        match self {
            TestFunction::Smooth(c) => c,
            TestFunction::Step(_) => &[],
        }
    }

    fn smooth_components(&self, op: &'static str) -> Result<&[Component]> {
        match self {
            TestFunction::Smooth(c) => Ok(c),
            TestFunction::Step(_) => Err(Error::Inadmissible {
                op,
                kind: self.kind().into(),
            }),
        }
    }

    /// Closed support on the log axis; `None` for the zero function.
    pub fn log_support(&self) -> Option<(f64, f64)> {
        match self {
            TestFunction::Step(s) => {
                let (a, b) = s.support();
                Some((a.ln(), b.ln()))
            }
            TestFunction::Smooth(c) => c.iter().map(Component::log_support).reduce(|a, b| {
                (a.0.min(b.0), a.1.max(b.1))
            }),
        }
    }

    /// Closed support in `(0, ∞)`.
    pub fn support(&self) -> Option<(f64, f64)> {
        self.log_support().map(|(a, b)| (a.exp(), b.exp()))
    }

    pub fn evaluate(&self, u: f64) -> Result<Complex64> {
        if !(u > 0.0) {
            return Err(Error::NonPositiveArgument(u));
        }
        Ok(match self {
            TestFunction::Step(s) => Complex64::new(s.value(u), 0.0),
            TestFunction::Smooth(_) => self.log_value(u.ln()),
        })
    }

    /// `g(e^x)`; zero for step functions off their support.
    pub fn log_value(&self, x: f64) -> Complex64 {
        match self {
            TestFunction::Step(s) => Complex64::new(s.value(x.exp()), 0.0),
            TestFunction::Smooth(c) => c.iter().map(|c| c.value(x)).sum(),
        }
    }

    /// `dⁿ/dxⁿ g(e^x)`.
    pub fn log_derivative(&self, x: f64, n: usize) -> Result<Complex64> {
        let comps = self.smooth_components("derivative")?;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in comps {
            acc += c.derivative(x, n).ok_or_else(|| Error::Inadmissible {
                op: "derivative",
                kind: format!("spline component beyond order {}", c.max_derivative()),
            })?;
        }
        Ok(acc)
    }

    /// Highest log-axis derivative order available for every component.
    pub fn max_derivative(&self) -> usize {
        self.components()
            .iter()
            .map(Component::max_derivative)
            .min()
            .unwrap_or(MAX_DERIVATIVE)
    }

    /// Log-axis breakpoints, maximal panel width and rule order under which
    /// every component is smooth on each panel; `None` for steps and zero.
    pub fn quadrature_layout(&self) -> Option<(Vec<f64>, f64, usize)> {
        let comps = self.components();
        if comps.is_empty() {
            return None;
        }
        let mut points = Vec::new();
        let mut width = f64::INFINITY;
        let mut order = GRID_ORDER;
        for c in comps {
            let (p, w, o) = c.quadrature_layout();
            points.extend(p);
            width = width.min(w);
            order = order.max(o);
        }
        Some((points, width, order))
    }

    /// Panels covering `[lo, hi]` on the log axis, with `extra` breakpoints
    /// and panel width capped at `max_width`.
    pub fn log_panels(&self, lo: f64, hi: f64, extra: &[f64], max_width: f64) -> Vec<Panel> {
        if hi <= lo {
            return Vec::new();
        }
        let (mut points, width, order) = self
            .quadrature_layout()
            .unwrap_or((Vec::new(), f64::INFINITY, BUMP_ORDER));
        points.extend_from_slice(extra);
        let points = clip_breakpoints(points, lo, hi);
        panels_from_breakpoints(&points, width.min(max_width), order)
    }

    /// `ĝ(s) = ∫ g(u) u^s du/u`.
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        match self {
            TestFunction::Step(st) => st.mellin(s),
            TestFunction::Smooth(c) => c.iter().map(|c| c.mellin(s)).sum(),
        }
    }

    /// `u ↦ (1/u) g(1/u)`.
    pub fn transpose(&self) -> Self {
        match self {
            TestFunction::Step(s) => TestFunction::Step(StepFunction {
                transposed: !s.transposed,
                ..*s
            }),
            TestFunction::Smooth(c) => TestFunction::Smooth(c.iter().map(Component::transpose).collect()),
        }
    }

    /// `u ↦ (1/u) conj(g(1/u))`.
    pub fn conj_reflect(&self) -> Self {
        match self.transpose() {
            TestFunction::Smooth(c) => TestFunction::Smooth(c.iter().map(Component::conj).collect()),
            step => step,
        }
    }

    /// `a · g`.
    pub fn scale(&self, a: Complex64) -> Result<Self> {
        let comps = self.smooth_components("scale")?;
        Ok(TestFunction::Smooth(comps.iter().map(|c| c.scale(a)).collect()))
    }

    /// `f + g` for smooth operands.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut comps = self.smooth_components("add")?.to_vec();
        comps.extend_from_slice(other.smooth_components("add")?);
        Ok(TestFunction::Smooth(comps))
    }

    /// `(Dg)(u) = −u g'(u)`, that is `−d/dx` on the log axis.
    pub fn derivation_d(&self) -> Result<Self> {
        let comps = self.smooth_components("derivation_D")?;
        let mut out = Vec::new();
        for c in comps {
            match c {
                Component::Bump(b) if b.order < MAX_DERIVATIVE => {
                    out.extend(b.derivation().into_iter().map(Component::Bump))
                }
                Component::Bump(_) => {
                    return Err(Error::Inadmissible {
                        op: "derivation_D",
                        kind: format!("bump term of order {MAX_DERIVATIVE}"),
                    })
                }
                Component::Grid(_) => {
                    return Err(Error::Inadmissible {
                        op: "derivation_D",
                        kind: "spline-sampled convolution product".into(),
                    })
                }
            }
        }
        Ok(TestFunction::Smooth(out))
    }

    /// `(f⋆k)(u) = ∫ f(u/v) k(v) dv/v` on the default grid.
    pub fn mconvolve(&self, other: &Self) -> Result<Self> {
        self.mconvolve_with_spacing(other, DEFAULT_SPACING)
    }

    /// Multiplicative convolution sampled with log spacing at most `spacing`.
    pub fn mconvolve_with_spacing(&self, other: &Self, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidArgument(format!("grid spacing must be positive, got {spacing}")));
        }
        let left = self.smooth_components("mconvolve")?;
        let right = other.smooth_components("mconvolve")?;
        let mut out = Vec::with_capacity(left.len() * right.len());
        for f in left {
            for k in right {
                out.push(Component::Grid(Arc::new(convolve_pair(f, k, spacing))));
            }
        }
        Ok(TestFunction::Smooth(out))
    }

    /// `g ⋆ ğ`, whose Mellin transform is `|ĝ|²` on the critical line.
    pub fn autocorrelate(&self) -> Result<Self> {
        self.mconvolve(&self.conj_reflect())
    }
}

/// Additive convolution `∫ F(x − y) K(y) dy` of two log-axis components.
fn convolve_pair(f: &Component, k: &Component, spacing: f64) -> LogGrid {
    let (fa, fb) = f.log_support();
    let (ka, kb) = k.log_support();
    let (lo, hi) = (fa + ka, fb + kb);
    let cells = ((hi - lo) / spacing).ceil().max(2.0) as usize;
    let step = (hi - lo) / cells as f64;
    let (f_points, f_width, f_order) = f.quadrature_layout();
    let (k_points, k_width, k_order) = k.quadrature_layout();
    let order = f_order.min(k_order);
    let width = f_width.min(k_width);
    let values: Vec<Complex64> = (0..=cells)
        .into_par_iter()
        .map(|i| {
            let x = lo + step * i as f64;
            // y ranges over supp K ∩ (x − supp F)
            let a = ka.max(x - fb);
            let b = kb.min(x - fa);
            if b <= a {
                return Complex64::new(0.0, 0.0);
            }
            let mut points: Vec<f64> = k_points.clone();
            points.extend(f_points.iter().map(|p| x - p));
            let points = clip_breakpoints(points, a, b);
            panels_from_breakpoints(&points, width, order)
                .iter()
                .map(|p| p.integrate(|y| f.value(x - y) * k.value(y)))
                .sum()
        })
        .collect();
    LogGrid::new(lo, step, values)
}
