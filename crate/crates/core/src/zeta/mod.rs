//! The Riemann zeta function on desk-scale heights, its zeros, and the
//! von Mangoldt function.

mod sieve;
mod table;
mod zeros;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::log_gamma;

pub use sieve::{lambda_von_mangoldt, psi_sum, VonMangoldtSieve, SIEVE_LIMIT};
pub use table::ZeroTable;
pub use zeros::{find_zeros, find_zeros_with_step, zero_count, MAX_HEIGHT};

const MAX_CORRECTION_TERMS: usize = 40;

/// `B_{2k}/(2k)!` for k = 1..=40, from `(−1)^{k+1} 2ζ(2k)/(2π)^{2k}`.
fn bernoulli_ratios() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=MAX_CORRECTION_TERMS)
            .map(|k| {
                let two_k = 2 * k as i32;
                let zeta = match k {
                    1 => PI * PI / 6.0,
                    2 => PI.powi(4) / 90.0,
                    _ => (1..=1000).rev().map(|n| (n as f64).powi(-two_k)).sum(),
                };
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta / (2.0 * PI).powi(two_k)
            })
            .collect()
    })
}

/// `ζ(s)` by Euler–Maclaurin summation, `s ≠ 1`.
pub fn zeta_em(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if (s - one).norm() < 1e-12 {
        return Err(Error::Pole {
            function: "zeta",
            location: one,
        });
    }
    let cutoff = (s.norm() / PI).ceil() as usize + 10;
    let n = cutoff as f64;
    let mut head = Complex64::new(0.0, 0.0);
    for k in (1..cutoff).rev() {
        head += (-s).expf(k as f64);
    }
    let n_pow = (-s).expf(n);
    let mut total = head + n_pow * n / (s - one) + n_pow * 0.5;
    // T_k = B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{1−s−2k}
    let mut rising = s;
    let mut power = n_pow / n;
    for (k, &ratio) in bernoulli_ratios().iter().enumerate() {
        let term = rising * power * ratio;
        total += term;
        if term.norm() <= 1e-17 * total.norm().max(1.0) {
            break;
        }
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power /= n * n;
    }
    Ok(total)
}

/// Riemann–Siegel theta `θ(t) = Im log Γ(1/4 + it/2) − (t/2) log π`.
pub fn rs_theta(t: f64) -> f64 {
    let lg = log_gamma(Complex64::new(0.25, 0.5 * t)).expect("Re = 1/4 avoids every pole");
    lg.im - 0.5 * t * PI.ln()
}

/// Hardy's `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, real for real `t`.
pub fn hardy_z(t: f64) -> f64 {
    let zeta = zeta_em(Complex64::new(0.5, t)).expect("the critical line avoids the pole");
    let z = Complex64::from_polar(1.0, rs_theta(t)) * zeta;
    debug_assert!(z.im.abs() <= 1e-9, "Z({t}) has imaginary residue {}", z.im);
    z.re
}
