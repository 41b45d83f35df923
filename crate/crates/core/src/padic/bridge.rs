use std::f64::consts::PI;

use num_complex::Complex64;

use super::{lift_radial, LevelFunction};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, line_integral, panels_from_breakpoints};
use crate::special::{gamma_factor, FieldPoint, Place};
use crate::testfn::TestFunction;
use crate::weil::{MellinLine, WEIL_LINE};

/// Test input of the local functional equation.
#[derive(Debug, Clone)]
pub enum GammaInput {
    /// `e^{−πx²}` on `R`, its own Fourier transform.
    Gaussian,
    /// A level function on `Q_p`.
    Level(LevelFunction),
}

/// `∫ φ̃(x)|x|^{s−1} dx / ∫ φ(y)|y|^{−s} dy`, which equals `Γ_ν(s)`.
pub fn gamma_identity_check(place: Place, s: Complex64, input: &GammaInput) -> Result<Complex64> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(Error::OutOfStrip {
            function: "gamma_identity_check",
            s,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let (left, right) = match (place, input) {
        (Place::Real, GammaInput::Gaussian) => (gaussian_moment(s - one), gaussian_moment(-s)),
        (Place::Prime(p), GammaInput::Level(phi)) if phi.p() == p => {
            (level_moment(&phi.fourier(), s - one), level_moment(phi, -s))
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "test input does not live on the place {place}"
            )))
        }
    };
    if right.norm() < 1e-300 {
        return Err(Error::VanishingDenominator("gamma_identity_check"));
    }
    Ok(left / right)
}

/// `∫_R e^{−πx²}|x|^a dx` for `Re a > −1`: the unit interval by the
/// term-wise series, the rest by Gauss–Legendre panels.
fn gaussian_moment(a: Complex64) -> Complex64 {
    let mut head = Complex64::new(0.0, 0.0);
    let mut coefficient = 1.0;
    for k in 0..80 {
        // ∫_0^1 x^{a+2k} dx = 1/(a + 2k + 1)
        head += coefficient / (a + (2 * k + 1) as f64);
        coefficient *= -PI / (k + 1) as f64;
    }
    let panels = panels_from_breakpoints(&[1.0, 7.0], 0.25, 20);
    let tail = integrate_panels(&panels, |x| (-PI * x * x).exp() * (a * x.ln()).exp());
    (head + tail) * 2.0
}

/// `∫_{Q_p} φ(y)|y|^a dy` for `Re a > −1`. The coset of 0 is the ball
/// `p^n Z_p`, on which `∫|y|^a = p^{−n(1+a)}(1 − 1/p)/(1 − p^{−1−a})`.
fn level_moment(phi: &LevelFunction, a: Complex64) -> Complex64 {
    let pf = phi.p() as f64;
    let (_, n) = phi.level();
    let volume = phi.coset_volume();
    let one = Complex64::new(1.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for (j, c) in phi.coefficients().iter().enumerate().skip(1) {
        let v = phi.coset_valuation(j as u64).expect("j ≠ 0");
        total += c * volume * (-a * v as f64).expf(pf);
    }
    let ball = (-(one + a) * n as f64).expf(pf) * (1.0 - 1.0 / pf) / (one - (-(one + a)).expf(pf));
    total + phi.coefficients()[0] * ball
}

/// Both sides of `F^{−1}(g_ν)(x) = (1/2πi) ∫_{Re s = 1/2} ĝ(s)|x|^{s−1}/Γ_ν(s) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinFourier {
    pub line: Complex64,
    pub direct: Complex64,
}

impl MellinFourier {
    pub fn defect(&self) -> f64 {
        (self.line - self.direct).norm()
    }
}

pub fn mellin_fourier_check(g: &TestFunction, place: Place, x: FieldPoint) -> Result<MellinFourier> {
    if g.is_step() {
        return Err(Error::Inadmissible {
            op: "Mellin-Fourier check",
            kind: g.kind().into(),
        });
    }
    let abs_x = x.abs(place)?;
    let mellin = MellinLine::new(g, 0.5);
    let log_x = abs_x.ln();
    let line = line_integral(
        |t| {
            let s = Complex64::new(0.5, t);
            Ok(mellin.at(t) * ((s - 1.0) * log_x).exp() / gamma_factor(place, s)?)
        },
        WEIL_LINE,
    )? / (2.0 * PI);
    let direct = match (place, x) {
        (Place::Real, _) => {
            // 2∫_0^∞ g(u) cos(2π|x|u) du in the variable log u
            let Some((a, b)) = g.log_support() else {
                return Ok(MellinFourier { line, direct: Complex64::new(0.0, 0.0) });
            };
            let panels = g.log_panels(a, b, &[], 0.05);
            integrate_panels(&panels, |y| {
                let u = y.exp();
                g.log_value(y) * (2.0 * u * (2.0 * PI * abs_x * u).cos())
            })
        }
        (Place::Prime(p), FieldPoint::Padic { valuation }) => {
            let shells = lift_radial(g, p)?;
            if shells.values.is_empty() {
                Complex64::new(0.0, 0.0)
            } else {
                // g_p vanishes near 0, so it lives at level (max(−v_min, 0), max(v_max + 1, 0))
                let m = (-shells.v_min).max(0) as u32;
                let n = (shells.v_max() + 1).max(0) as u32;
                let phi = LevelFunction::from_fn(p, m, n, |j| {
                    if j == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        let v = super::valuation(j, p) as i32 - m as i32;
                        shells.at(v)
                    }
                })?;
                phi.inverse_fourier().value_at(1, valuation)
            }
        }
        _ => unreachable!("x.abs(place) accepted the pair"),
    };
    Ok(MellinFourier { line, direct })
}
