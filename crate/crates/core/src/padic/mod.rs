//! Finite harmonic analysis on `Q_p`: level functions, their Fourier
//! transform, Haran's distribution and the conductor operator.

mod bridge;
mod conductor;
mod level;
mod shell;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use bridge::{gamma_identity_check, mellin_fourier_check, GammaInput, MellinFourier};
pub use conductor::{commutation_check, conductor_apply, cuspidal_spectrum, ConductorMatrix};
pub use level::LevelFunction;
pub use shell::{
    g_apply_prime, g_apply_real, haran_term, lift_radial, one_minus_t_shells, ShellFunction,
    ShellPiece,
};

/// Largest coset count a level function may carry.
pub const MAX_COSETS: u64 = 1 << 22;

/// `p^k`, or a level error past [`MAX_COSETS`].
pub(crate) fn cosets(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|&n| n <= MAX_COSETS)
        .ok_or_else(|| Error::Level(format!("{p}^{k} cosets exceed the desk-scale limit {MAX_COSETS}")))
}

/// `v_p(j)` for `j ≠ 0`.
pub(crate) fn valuation(mut j: u64, p: u64) -> u32 {
    debug_assert!(j != 0);
    let mut v = 0;
    while j % p == 0 {
        j /= p;
        v += 1;
    }
    v
}

/// Inverse of a unit modulo `modulus`.
pub(crate) fn mod_inverse(a: u64, modulus: u64) -> u64 {
    let (mut r0, mut r1) = (modulus as i128, (a % modulus) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not a unit mod {modulus}");
    t0.rem_euclid(modulus as i128) as u64
}

/// `ψ_p(x) = e^{2πi{x}_p}` at `x = numerator/denominator`.
pub fn additive_character(p: u64, numerator: i64, denominator: u64) -> Result<Complex64> {
    if denominator == 0 {
        return Err(Error::InvalidArgument("denominator must be nonzero".into()));
    }
    // denominator = p^k · d with p ∤ d; {x}_p = (a d^{-1} mod p^k)/p^k
    let mut d = denominator;
    let mut pk: u64 = 1;
    while d % p == 0 {
        d /= p;
        pk = pk
            .checked_mul(p)
            .ok_or_else(|| Error::InvalidArgument("denominator too large".into()))?;
    }
    if pk == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let a = (numerator as i128).rem_euclid(pk as i128) as u64;
    let c = ((a as u128 * mod_inverse(d, pk) as u128) % pk as u128) as u64;
    Ok(Complex64::from_polar(1.0, 2.0 * PI * c as f64 / pk as f64))
}
