use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{hardy_z, rs_theta, zeta_em, ZeroTable};
use crate::error::{Error, Result};

/// Highest ordinate the zero finder accepts.
pub const MAX_HEIGHT: f64 = 1000.0;

const SCAN_STEP: f64 = 0.08;
const REFINEMENT: f64 = 8.0;
const BISECTION_TOL: f64 = 1e-9;

/// `arg ζ(1/2 + it)` by continuous variation along `2 + it → 1/2 + it`.
///
/// Starts from the principal value, which is exact because `Re ζ(2 + it) > 0`.
fn critical_argument(t: f64) -> Result<f64> {
    let mut sigma = 2.0;
    let mut prev = zeta_em(Complex64::new(sigma, t))?;
    let mut arg = prev.arg();
    let mut step = 0.01;
    while sigma > 0.5 {
        let next_sigma = (sigma - step).max(0.5);
        let cur = zeta_em(Complex64::new(next_sigma, t))?;
        let delta = (cur / prev).arg();
        if delta.abs() > PI / 4.0 && step > 1e-7 {
            step *= 0.5;
            continue;
        }
        arg += delta;
        prev = cur;
        sigma = next_sigma;
        step = (step * 2.0).min(0.01);
    }
    Ok(arg)
}

/// Number of zeros with `0 < γ ≤ t`, from `θ(t)/π + 1 + S(t)`.
pub fn zero_count(t: f64) -> Result<usize> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("zero count needs finite t, got {t}")));
    }
    // no zero lies below height 1, where the path would pass the pole
    if t < 1.0 {
        return Ok(0);
    }
    let value = rs_theta(t) / PI + 1.0 + critical_argument(t)? / PI;
    let nearest = value.round();
    if (value - nearest).abs() > 0.25 || nearest < 0.0 {
        return Err(Error::AmbiguousCount { t, value });
    }
    Ok(nearest as usize)
}

fn bisect(mut lo: f64, mut hi: f64, mut z_lo: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let z_mid = hardy_z(mid);
        if z_mid == 0.0 {
            return mid;
        }
        if (z_mid < 0.0) == (z_lo < 0.0) {
            lo = mid;
            z_lo = z_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn scan(t_max: f64, step: f64) -> Vec<f64> {
    let cells = (t_max / step).ceil().max(1.0) as usize;
    let h = t_max / cells as f64;
    let grid: Vec<f64> = (0..=cells).map(|i| if i == cells { t_max } else { h * i as f64 }).collect();
    let values: Vec<f64> = grid.par_iter().map(|&t| hardy_z(t)).collect();
    let brackets: Vec<(f64, f64, f64)> = (0..cells)
        .filter(|&i| values[i + 1] == 0.0 || values[i] * values[i + 1] < 0.0)
        .map(|i| (grid[i], grid[i + 1], values[i]))
        .collect();
    brackets
        .par_iter()
        .map(|&(lo, hi, z_lo)| bisect(lo, hi, z_lo))
        .collect()
}

/// All zeros with `0 < γ ≤ t_max`, certified against [`zero_count`].
pub fn find_zeros(t_max: f64) -> Result<ZeroTable> {
    find_zeros_with_step(t_max, SCAN_STEP)
}

/// As [`find_zeros`] with a given initial scan step; one refinement by a
/// factor of eight is attempted on a count mismatch.
pub fn find_zeros_with_step(t_max: f64, step: f64) -> Result<ZeroTable> {
    if !(t_max > 0.0 && t_max <= MAX_HEIGHT) {
        return Err(Error::InvalidArgument(format!(
            "t_max must lie in (0, {MAX_HEIGHT}], got {t_max}"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("scan step must be positive, got {step}")));
    }
    let expected = zero_count(t_max)?;
    let mut found = scan(t_max, step);
    if found.len() != expected {
        found = scan(t_max, step / REFINEMENT);
    }
    if found.len() != expected {
        return Err(Error::CountMismatch {
            expected,
            found: found.len(),
        });
    }
    ZeroTable::new(found, t_max, BISECTION_TOL)
}
