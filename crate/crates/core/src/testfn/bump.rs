use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::quadrature::Panel;

/// Highest derivative order of the bump kernel kept in the table.
pub const MAX_DERIVATIVE: usize = 24;

/// Coefficients (ascending) of `P_k` with `B^{(k)}(y) = B(y) P_k(y) / (1-y²)^{2k}`.
fn derivative_polynomials() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![vec![1.0]];
        for k in 0..MAX_DERIVATIVE {
            let p = &table[k];
            let kf = k as f64;
            // P_{k+1} = (P_k' (1-y²) + 4k y P_k)(1-y²) - 2y P_k
            let mut inner = vec![0.0; p.len() + 2];
            for (i, &c) in p.iter().enumerate().skip(1) {
                let d = c * i as f64;
                inner[i - 1] += d;
                inner[i + 1] -= d;
            }
            for (i, &c) in p.iter().enumerate() {
                inner[i + 1] += 4.0 * kf * c;
            }
            let mut next = vec![0.0; inner.len() + 2];
            for (i, &c) in inner.iter().enumerate() {
                next[i] += c;
                next[i + 2] -= c;
            }
            for (i, &c) in p.iter().enumerate() {
                next[i + 1] -= 2.0 * c;
            }
            while next.len() > 1 && *next.last().unwrap() == 0.0 {
                next.pop();
            }
            table.push(next);
        }
        table
    })
}

/// `B^{(k)}(y)` for the kernel `B(y) = exp(-1/(1-y²))` on `|y| < 1`.
pub fn kernel_derivative(k: usize, y: f64) -> f64 {
    if y.abs() >= 1.0 {
        return 0.0;
    }
    let q = 1.0 - y * y;
    let exponent = -1.0 / q - 2.0 * k as f64 * q.ln();
    if exponent < -745.0 {
        return 0.0;
    }
    let poly = &derivative_polynomials()[k];
    let mut acc = 0.0;
    for &c in poly.iter().rev() {
        acc = acc * y + c;
    }
    acc * exponent.exp()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// One term `x ↦ amp · e^{weight·x} · B^{(order)}((x - center)/halfwidth)` on the log axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpTerm {
    pub amp: Complex64,
    pub center: f64,
    pub halfwidth: f64,
    pub weight: f64,
    pub order: usize,
}

impl BumpTerm {
    pub fn new(amp: Complex64, center: f64, halfwidth: f64) -> Self {
        Self {
            amp,
            center,
            halfwidth,
            weight: 0.0,
            order: 0,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.halfwidth, self.center + self.halfwidth)
    }

    pub fn value(&self, x: f64) -> Complex64 {
        let y = (x - self.center) / self.halfwidth;
        if y.abs() >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.amp * ((self.weight * x).exp() * kernel_derivative(self.order, y))
    }

    /// `n`-th derivative in the log variable.
    pub fn derivative(&self, x: f64, n: usize) -> Complex64 {
        let y = (x - self.center) / self.halfwidth;
        if y.abs() >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = 0.0;
        for j in 0..=n {
            if self.order + j > MAX_DERIVATIVE {
                break;
            }
            let scale = binomial(n, j)
                * self.weight.powi((n - j) as i32)
                * self.halfwidth.powi(-(j as i32));
            if scale == 0.0 {
                continue;
            }
            acc += scale * kernel_derivative(self.order + j, y);
        }
        self.amp * ((self.weight * x).exp() * acc)
    }

    /// The term of `u ↦ (1/u) g(1/u)`.
    pub fn transpose(&self) -> Self {
        let sign = if self.order % 2 == 0 { 1.0 } else { -1.0 };
        Self {
            amp: self.amp * sign,
            center: -self.center,
            halfwidth: self.halfwidth,
            weight: -1.0 - self.weight,
            order: self.order,
        }
    }

    /// Terms of `x ↦ -d/dx` applied to this one.
    pub fn derivation(&self) -> Vec<Self> {
        let mut out = Vec::with_capacity(2);
        if self.weight != 0.0 {
            out.push(Self {
                amp: -self.amp * self.weight,
                ..*self
            });
        }
        out.push(Self {
            amp: -self.amp / self.halfwidth,
            order: self.order + 1,
            ..*self
        });
        out
    }

    /// Panel edges resolving the kernel (sixteen panels across the support).
    pub fn breakpoints(&self) -> Vec<f64> {
        (0..=16)
            .map(|i| self.center + self.halfwidth * (-1.0 + i as f64 / 8.0))
            .collect()
    }

    pub fn max_panel_width(&self) -> f64 {
        self.halfwidth / 8.0
    }

    /// `∫ value(x) · weight(x) dx` with `x = center + halfwidth·tanh τ`, which
    /// flattens the essential singularities at the support edges.
    ///
    /// `frequency` bounds `|d/dx arg weight|`; panels are sized so that the
    /// phase advances at most 25 radians per panel.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, frequency: f64, mut weight: F) -> Complex64 {
        let panels = ((2.0 * REACH * self.halfwidth * frequency / 25.0).ceil() as usize).max(16);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(y, w) in mapped_nodes(self.order, panels).iter() {
            let x = self.center + self.halfwidth * y;
            acc += weight(x) * ((self.weight * x).exp() * w);
        }
        acc * (self.amp * self.halfwidth)
    }
}

const REACH: f64 = 4.0;

/// Nodes `y = tanh τ` and weights `w · B^{(order)}(y) sech²τ` of `panels`
/// Gauss–Legendre panels on `τ ∈ [−REACH, REACH]`; shared by every bump.
fn mapped_nodes(order: usize, panels: usize) -> Arc<Vec<(f64, f64)>> {
    type Table = RwLock<HashMap<(usize, usize), Arc<Vec<(f64, f64)>>>>;
    static TABLES: OnceLock<Table> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.read().expect("node table lock").get(&(order, panels)) {
        return t.clone();
    }
    let h = 2.0 * REACH / panels as f64;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|i| {
            let panel = Panel::new(-REACH + h * i as f64, -REACH + h * (i + 1) as f64, 20);
            panel.points().collect::<Vec<_>>()
        })
        .map(|(tau, w)| {
            let y = tau.tanh();
            let sech = 1.0 / tau.cosh();
            (y, w * kernel_derivative(order, y) * sech * sech)
        })
        .collect();
    let nodes = Arc::new(nodes);
    tables
        .write()
        .expect("node table lock")
        .insert((order, panels), nodes.clone());
    nodes
}
