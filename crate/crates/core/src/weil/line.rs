use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{line_integral, LineSettings};
use crate::special::{lambda_factor, Place};
use crate::testfn::TestFunction;

/// Line settings for every Weil contour. `Λ_p(1/2 + it)` carries harmonics
/// `e^{−ikt log p}` of size `p^{−k/2}`; resolving them to 1e−8 needs about
/// 30 nodes per unit of `t`.
pub const WEIL_LINE: LineSettings = LineSettings {
    block: 20.0,
    tolerance: 1e-10,
    cap: 2000.0,
    panels_per_block: 30,
    order: 20,
};

/// `t ↦ ĝ(c + it)`, memoised so several places can share one set of transforms.
pub struct MellinLine<'a> {
    g: &'a TestFunction,
    abscissa: f64,
    real: bool,
    cache: Mutex<HashMap<u64, Complex64>>,
}

impl<'a> MellinLine<'a> {
    pub fn new(g: &'a TestFunction, abscissa: f64) -> Self {
        Self {
            g,
            abscissa,
            real: g.is_real(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn abscissa(&self) -> f64 {
        self.abscissa
    }

    pub fn at(&self, t: f64) -> Complex64 {
        if self.real && t < 0.0 {
            return self.at(-t).conj();
        }
        let key = t.to_bits();
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return *v;
        }
        let v = self.g.mellin(Complex64::new(self.abscissa, t));
        self.cache.lock().expect("cache lock").insert(key, v);
        v
    }

    /// `(1/2π) ∫ Λ_ν(c + it) ĝ(c + it) |y|^{−c−it} dt`.
    pub fn weil_term(&self, place: Place, abs_y: f64) -> Result<Complex64> {
        let c = self.abscissa;
        let log_y = abs_y.ln();
        let integral = line_integral(
            |t| {
                let s = Complex64::new(c, t);
                let weight = (-s * log_y).exp();
                Ok(lambda_factor(place, s)? * self.at(t) * weight)
            },
            WEIL_LINE,
        )?;
        Ok(integral / (2.0 * PI))
    }
}

/// `W_ν(g;y)` through the inverse Mellin integral on `Re s = c`.
pub fn contour_term(g: &TestFunction, place: Place, abscissa: f64, abs_y: f64) -> Result<Complex64> {
    if g.is_step() {
        return Err(Error::Inadmissible {
            op: "contour integral",
            kind: g.kind().into(),
        });
    }
    if !(abscissa > 0.0 && abscissa < 1.0) {
        return Err(Error::OutOfStrip {
            function: "contour integral",
            s: Complex64::new(abscissa, 0.0),
        });
    }
    MellinLine::new(g, abscissa).weil_term(place, abs_y)
}
