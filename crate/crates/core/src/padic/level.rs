use std::io::Write;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::{cosets, mod_inverse, valuation};
use crate::error::{Error, Result};

/// A Schwartz–Bruhat function on `Q_p` supported in `p^{−m}Z_p` and constant
/// on cosets of `p^n Z_p`.
///
/// Entry `j` (`0 ≤ j < p^{m+n}`) is the value on `j/p^m + p^n Z_p`; every coset
/// has volume `p^{−n}`. Entry 0 is the coset containing 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFunction {
    p: u64,
    m: u32,
    n: u32,
    coefficients: Vec<Complex64>,
}

impl LevelFunction {
    pub fn new(p: u64, m: u32, n: u32, coefficients: Vec<Complex64>) -> Result<Self> {
        let count = cosets(p, m + n)?;
        if coefficients.len() as u64 != count {
            return Err(Error::Level(format!(
                "level ({m},{n}) at p = {p} needs {count} coefficients, got {}",
                coefficients.len()
            )));
        }
        Ok(Self { p, m, n, coefficients })
    }

    pub fn zero(p: u64, m: u32, n: u32) -> Result<Self> {
        let count = cosets(p, m + n)? as usize;
        Self::new(p, m, n, vec![Complex64::new(0.0, 0.0); count])
    }

    /// `x ↦ f(j, x)` sampled at the representatives `x = j/p^m`.
    pub fn from_fn<F: FnMut(u64) -> Complex64>(p: u64, m: u32, n: u32, f: F) -> Result<Self> {
        let count = cosets(p, m + n)?;
        Self::new(p, m, n, (0..count).map(f).collect())
    }

    /// Indicator of `p^k Z_p` (`k` may be negative), at the coarsest level.
    pub fn ball_indicator(p: u64, k: i32) -> Result<Self> {
        let (m, n) = (k.min(0).unsigned_abs(), k.max(0) as u32);
        let one = Complex64::new(1.0, 0.0);
        // with m = 0 the ball is the 0-coset; with n = 0 it is everything
        Self::from_fn(p, m, n, |j| {
            if k < 0 || j == 0 {
                one
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(m, n)`.
    pub fn level(&self) -> (u32, u32) {
        (self.m, self.n)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coset_volume(&self) -> f64 {
        (self.p as f64).powi(-(self.n as i32))
    }

    /// `v_p` of the coset `j ≠ 0`; `None` for the coset containing 0.
    pub fn coset_valuation(&self, j: u64) -> Option<i32> {
        (j != 0).then(|| valuation(j, self.p) as i32 - self.m as i32)
    }

    /// `‖φ‖² = p^{−n} Σ |c_j|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coset_volume() * self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `∫ φ`.
    pub fn integral(&self) -> Complex64 {
        self.coefficients.iter().sum::<Complex64>() * self.coset_volume()
    }

    /// `⟨φ, χ⟩ = ∫ conj(φ) χ` at a common level.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_level(other)?;
        let sum: Complex64 = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.coset_volume())
    }

    fn same_level(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.level() != other.level() {
            return Err(Error::Level(format!(
                "p = {}, level {:?} against p = {}, level {:?}",
                self.p,
                self.level(),
                other.p,
                other.level()
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(u64, Complex64) -> Complex64) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .enumerate()
                .map(|(j, &c)| f(j as u64, c))
                .collect(),
            ..*self
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map(|_, c| c * a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(self.map(|j, c| c - other.coefficients[j as usize]))
    }

    /// The same function at a finer level `(m2, n2) ≥ (m, n)`.
    pub fn refine(&self, m2: u32, n2: u32) -> Result<Self> {
        if m2 < self.m || n2 < self.n {
            return Err(Error::Level(format!(
                "cannot refine level {:?} to ({m2},{n2})",
                self.level()
            )));
        }
        let shift = cosets(self.p, m2 - self.m)?;
        let modulus = self.coefficients.len() as u64;
        Self::from_fn(self.p, m2, n2, |j| {
            // j/p^{m2} lies in p^{−m}Z_p iff p^{m2−m} | j
            if j % shift == 0 {
                self.coefficients[((j / shift) % modulus) as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Value at `x = unit · p^v` with `p ∤ unit`.
    pub fn value_at(&self, unit: u64, v: i32) -> Complex64 {
        let modulus = self.coefficients.len() as u64;
        let shifted = v + self.m as i32;
        if shifted < 0 {
            return Complex64::new(0.0, 0.0);
        }
        if shifted as u32 >= self.m + self.n {
            return self.coefficients[0];
        }
        let scale = self.p.pow(shifted as u32);
        let j = ((unit % modulus) as u128 * scale as u128 % modulus as u128) as usize;
        self.coefficients[j]
    }

    /// `x ↦ φ(−x)`.
    pub fn reflect(&self) -> Self {
        let n = self.coefficients.len();
        self.map(|j, _| self.coefficients[(n - j as usize) % n])
    }

    /// `x ↦ φ(u x)` for a unit `u`.
    pub fn unit_action(&self, unit: u64) -> Self {
        let n = self.coefficients.len() as u64;
        self.map(|j, _| self.coefficients[((j as u128 * unit as u128) % n as u128) as usize])
    }

    /// `(Fφ)(ξ) = ∫ φ(x) ψ_p(xξ) dx`, at level `(n, m)`:
    /// `(Fφ)(i/p^n) = p^{−n} Σ_j c_j e^{2πi ij/p^{m+n}}`.
    pub fn fourier(&self) -> Self {
        self.transform(FftDirection::Inverse)
    }

    /// `F^{−1}φ(ξ) = ∫ φ(x) ψ_p(−xξ) dx`.
    pub fn inverse_fourier(&self) -> Self {
        self.transform(FftDirection::Forward)
    }

    fn transform(&self, direction: FftDirection) -> Self {
        let mut buffer = self.coefficients.clone();
        let fft = FftPlanner::new().plan_fft(buffer.len(), direction);
        fft.process(&mut buffer);
        let volume = self.coset_volume();
        for c in &mut buffer {
            *c *= volume;
        }
        Self {
            p: self.p,
            m: self.n,
            n: self.m,
            coefficients: buffer,
        }
    }

    /// Subtract from every multiplicative shell its average; the coset of 0
    /// counts as one orbit and is cleared.
    pub fn cusp_project(&self) -> Self {
        let depth = (self.m + self.n) as usize;
        let mut sums = vec![Complex64::new(0.0, 0.0); depth];
        let mut counts = vec![0usize; depth];
        for (j, c) in self.coefficients.iter().enumerate().skip(1) {
            let e = valuation(j as u64, self.p) as usize;
            sums[e] += c;
            counts[e] += 1;
        }
        self.map(|j, c| {
            if j == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let e = valuation(j, self.p) as usize;
            c - sums[e] / counts[e] as f64
        })
    }

    /// Size below which a coefficient counts as rounding noise.
    fn negligible(&self) -> f64 {
        1e-13 * self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Valuations `[k_min, k_max]` of the shells where `φ` is nonzero off the coset of 0.
    pub fn shell_range(&self) -> Option<(i32, i32)> {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| c.norm() > self.negligible())
            .map(|(j, _)| self.coset_valuation(j as u64).expect("j ≠ 0"))
            .fold(None, |acc, k| match acc {
                None => Some((k, k)),
                Some((lo, hi)) => Some((lo.min(k), hi.max(k))),
            })
    }

    /// `(Iφ)(t) = |t|^{−1} φ(1/t)`, for `φ` vanishing on the coset of 0.
    ///
    /// On the shell `|x| = p^{−k}` the input is constant on `x + p^n Z_p`, so
    /// `1/x` is constant on cosets of `p^{n−2k}`. Over the occupied shells
    /// `k_min..=k_max` the output lives at level
    /// `(max(k_max, 0), max(n − 2k_min, 1 − k_min, 0))`.
    pub fn inversion(&self) -> Result<Self> {
        if self.coefficients[0].norm() > self.negligible() {
            return Err(Error::Admissibility(
                "inversion needs a function vanishing on the coset of 0".into(),
            ));
        }
        let Some((k_min, k_max)) = self.shell_range() else {
            return Ok(self.clone());
        };
        let (m, n, p) = (self.m, self.n, self.p);
        let m2 = k_max.max(0) as u32;
        let n2 = (n as i32 - 2 * k_min).max(1 - k_min).max(0) as u32;
        let source = self.coefficients.len() as u64;
        let target = cosets(p, m2 + n2)?;
        // input coset and the factor |t|^{−1} for the representative t = j2/p^{m2}
        let pick = |j2: u64| -> Option<(usize, f64)> {
            if j2 % target == 0 {
                return None;
            }
            let e = valuation(j2, p);
            let k_t = e as i32 - m2 as i32;
            // x = 1/t has valuation −k_t
            if !(k_min..=k_max).contains(&-k_t) {
                return None;
            }
            let unit = j2 / p.pow(e);
            let scale = p.pow((m as i32 - k_t) as u32);
            let j = (scale as u128 * mod_inverse(unit, source) as u128 % source as u128) as usize;
            Some((j, (p as f64).powi(k_t)))
        };
        let mut out = Vec::with_capacity(target as usize);
        for j2 in 0..target {
            let value = match pick(j2) {
                Some((j, factor)) => {
                    // another representative of the same coset must land on the same input coset
                    if pick(j2 + target).map(|(jj, _)| jj) != Some(j) {
                        return Err(Error::Level(format!("inversion is not constant on coset {j2}")));
                    }
                    self.coefficients[j] * factor
                }
                None => Complex64::new(0.0, 0.0),
            };
            out.push(value);
        }
        Self::new(p, m2, n2, out)
    }

    /// Debug dump: `j,representative,value_re,value_im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "j,representative,value_re,value_im")?;
        for (j, c) in self.coefficients.iter().enumerate() {
            writeln!(out, "{j},{j}/{}^{},{:.17e},{:.17e}", self.p, self.m, c.re, c.im)?;
        }
        Ok(())
    }
}
