use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{clip_breakpoints, integrate_panels, panels_from_breakpoints};
use crate::special::{Place, EULER_GAMMA};
use crate::testfn::TestFunction;

/// A radial function `x ↦ φ(|x|_p)` with finitely many free shells.
///
/// `values[i]` is the value on `|x| = p^{−(v_min + i)}`. Shells deeper than the
/// window carry `value_at_zero` (the function is locally constant at 0);
/// shells outside it carry 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellFunction {
    pub p: u64,
    pub v_min: i32,
    pub values: Vec<Complex64>,
    pub value_at_zero: Complex64,
}

impl ShellFunction {
    pub fn v_max(&self) -> i32 {
        self.v_min + self.values.len() as i32 - 1
    }

    /// Value on the shell `|x| = p^{−v}`.
    pub fn at(&self, v: i32) -> Complex64 {
        if v < self.v_min {
            Complex64::new(0.0, 0.0)
        } else if v > self.v_max() {
            self.value_at_zero
        } else {
            self.values[(v - self.v_min) as usize]
        }
    }
}

/// `g_p: x ↦ g(|x|_p)` over the shells `p^{−v}` inside the support of `g`.
pub fn lift_radial(g: &TestFunction, p: u64) -> Result<ShellFunction> {
    let zero = Complex64::new(0.0, 0.0);
    let empty = ShellFunction {
        p,
        v_min: 0,
        values: Vec::new(),
        value_at_zero: zero,
    };
    let Some((a, b)) = g.log_support() else {
        return Ok(empty);
    };
    let log_p = (p as f64).ln();
    // p^{−v} ∈ [e^a, e^b]
    let v_min = (-b / log_p).ceil() as i32;
    let v_max = (-a / log_p).floor() as i32;
    if v_max < v_min {
        return Ok(empty);
    }
    let values = (v_min..=v_max)
        .map(|v| g.evaluate((p as f64).powi(-v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShellFunction {
        p,
        v_min,
        values,
        value_at_zero: zero,
    })
}

/// `G_p(φ) = log p/(1 − 1/p) · (∫_{|t|≤1} (φ − φ(0)) dt/|t| + ∫_{|t|>1} φ dt/|t| + φ(0)/p)`.
///
/// Each shell weighs `(1 − 1/p)` against `dt/|t|`.
pub fn g_apply_prime(phi: &ShellFunction) -> Complex64 {
    let pf = phi.p as f64;
    let shell = 1.0 - 1.0 / pf;
    let phi0 = phi.value_at_zero;
    // shells outside [lo, hi] contribute only through φ(0)
    let (lo, hi) = (phi.v_min.min(0), phi.v_max().max(-1));
    let mut total = Complex64::new(0.0, 0.0);
    for v in lo..=hi {
        let mut term = phi.at(v);
        if v >= 0 {
            term -= phi0;
        }
        total += term * shell;
    }
    (total + phi0 / pf) * (pf.ln() / shell)
}

/// `G_r(φ) = (log 2π + γ) φ(0) + ∫_{|t|≤1} (φ − φ(0)) dt/(2|t|) + ∫_{|t|>1} φ dt/(2|t|)`
/// for `φ` vanishing beyond `reach`, smooth between `breakpoints`.
///
/// Evaluated on two panel resolutions; disagreement beyond 1e−9 is a
/// non-convergence error.
pub fn g_apply_real<F>(phi: F, breakpoints: &[f64], reach: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let phi0 = phi(0.0);
    // fold t and −t together: ∫_0 (φ(t) + φ(−t) − 2φ(0)·1_{t≤1}) dt/(2t)
    let even = |t: f64| phi(t) + phi(-t);
    let mut points: Vec<f64> = breakpoints.iter().map(|t| t.abs()).collect();
    points.push(1.0);
    let points = clip_breakpoints(points, 0.0, reach.max(1.0));
    let estimate = |width: f64| {
        let mut total = Complex64::new((2.0 * PI).ln() + EULER_GAMMA, 0.0) * phi0;
        for piece in points.windows(2) {
            let panels = panels_from_breakpoints(piece, width, 20);
            total += if piece[1] <= 1.0 {
                integrate_panels(&panels, |t| (even(t) - phi0 * 2.0) / (2.0 * t))
            } else {
                integrate_panels(&panels, |t| even(t) / (2.0 * t))
            };
        }
        total
    };
    let coarse = estimate(0.04);
    let fine = estimate(0.02);
    if (coarse - fine).norm() > 1e-9 * fine.norm().max(1.0) {
        return Err(Error::NonConvergence {
            what: "real-place G quadrature",
            reached: (coarse - fine).norm(),
        });
    }
    Ok(fine)
}

/// One piece of the decomposition of `t ↦ |1 − t|_p`: on the part of the shell
/// `|t| = p^{−t_valuation}` of additive measure `measure`, `|1 − t| = p^{−value_valuation}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellPiece {
    pub t_valuation: i32,
    pub value_valuation: i32,
    pub measure: f64,
}

/// The pieces with `|t| ≤ p^{depth}` and `|1 − t| ≥ p^{−depth}`; the omitted
/// units `t ∈ 1 + p^{depth+1}Z_p` have measure `p^{−depth−1}`.
///
/// * `|t| = p^k`, `k ≥ 1`: `|1 − t| = p^k` on measure `p^k(1 − 1/p)`;
/// * `|t| < 1`: `|1 − t| = 1` on measure `1/p`;
/// * `|t| = 1`: `|1 − t| = p^{−m}`, `m ≥ 1`, on measure `p^{−m}(1 − 1/p)`, and
///   `|1 − t| = 1` on measure `(p − 2)/p`.
pub fn one_minus_t_shells(p: u64, depth: u32) -> Vec<ShellPiece> {
    let pf = p as f64;
    let mut pieces = Vec::new();
    for k in 1..=depth as i32 {
        pieces.push(ShellPiece {
            t_valuation: -k,
            value_valuation: -k,
            measure: pf.powi(k) * (1.0 - 1.0 / pf),
        });
    }
    pieces.push(ShellPiece {
        t_valuation: 1,
        value_valuation: 0,
        measure: 1.0 / pf,
    });
    if p > 2 {
        pieces.push(ShellPiece {
            t_valuation: 0,
            value_valuation: 0,
            measure: (pf - 2.0) / pf,
        });
    }
    for m in 1..=depth as i32 {
        pieces.push(ShellPiece {
            t_valuation: 0,
            value_valuation: m,
            measure: pf.powi(-m) * (1.0 - 1.0 / pf),
        });
    }
    pieces
}

/// `(G_ν ⋆ g_ν)(1) = G_ν(t ↦ g(|1 − t|_ν))`.
pub fn haran_term(g: &TestFunction, place: Place) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let Some((a, b)) = g.log_support() else {
        return Ok(zero);
    };
    match place {
        Place::Prime(p) => {
            let pf = p as f64;
            let log_p = pf.ln();
            let depth = ((b.max(-a) / log_p).ceil() as u32).max(1) + 1;
            let g_at = |v: i32| g.evaluate(pf.powi(-v));
            // shell averages of t ↦ g(|1 − t|): |t| > 1, units, and |t| < 1 (the value at 0)
            let mut sums = vec![zero; depth as usize + 1];
            for piece in one_minus_t_shells(p, depth) {
                if piece.t_valuation <= 0 {
                    let slot = (piece.t_valuation + depth as i32) as usize;
                    sums[slot] += g_at(piece.value_valuation)? * piece.measure;
                }
            }
            let values = sums
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let v = i as i32 - depth as i32;
                    // shell |t| = p^{−v} has measure p^{−v}(1 − 1/p)
                    s / (pf.powi(-v) * (1.0 - 1.0 / pf))
                })
                .collect();
            Ok(g_apply_prime(&ShellFunction {
                p,
                v_min: -(depth as i32),
                values,
                value_at_zero: g_at(0)?,
            }))
        }
        Place::Real => {
            if g.is_step() {
                return Err(Error::Inadmissible {
                    op: "real-place Haran term",
                    kind: g.kind().into(),
                });
            }
            let (lo, hi) = (a.exp(), b.exp());
            let (log_points, _, _) = g.quadrature_layout().expect("smooth function with support");
            let mut breakpoints = vec![1.0];
            for x in log_points {
                let r = x.exp();
                breakpoints.push(1.0 - r);
                breakpoints.push(1.0 + r);
            }
            let phi = |t: f64| {
                let r = (1.0 - t).abs();
                if r > lo && r < hi {
                    g.log_value(r.ln())
                } else {
                    zero
                }
            };
            g_apply_real(phi, &breakpoints, 1.0 + hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::valuation;

    #[test]
    fn shell_table_matches_coset_enumeration() {
        for p in [2u64, 3, 5] {
            let depth = 4u32;
            // one level finer than the table, so |1 − t| = p^{−depth} is resolved
            let n = p.pow(depth + 1);
            let pf = p as f64;
            let table = one_minus_t_shells(p, depth);
            // t ∈ Z_p at level (0, depth + 1): skip the omitted coset 1 − t ≡ 0
            let mut tally = std::collections::HashMap::new();
            for j in 0..n {
                let t_val = if j == 0 { depth as i32 } else { valuation(j, p) as i32 };
                let r = (1 + n - j) % n;
                if r == 0 {
                    continue;
                }
                let key = (t_val.min(1), valuation(r, p) as i32);
                *tally.entry(key).or_insert(0.0) += pf.powi(-(depth as i32) - 1);
            }
            // |t| > 1 at level (depth, 0): t = j/p^depth, 1 − t = (p^depth − j)/p^depth
            let outer = p.pow(depth);
            for j in 1..outer {
                let k = depth as i32 - valuation(j, p) as i32;
                let value = valuation(outer - j, p) as i32 - depth as i32;
                *tally.entry((-k, value)).or_insert(0.0) += 1.0;
            }
            for piece in &table {
                let key = (piece.t_valuation, piece.value_valuation);
                let found = tally.get(&key).copied().unwrap_or(0.0);
                assert!((found - piece.measure).abs() < 1e-12, "p={p} {key:?}: {found} vs {}", piece.measure);
            }
            let units: f64 = table.iter().filter(|s| s.t_valuation == 0).map(|s| s.measure).sum();
            assert!((units + pf.powi(-(depth as i32) - 1) - (1.0 - 1.0 / pf)).abs() < 1e-15);
        }
    }

    #[test]
    fn indicator_values() {
        let one = Complex64::new(1.0, 0.0);
        for p in [2u64, 3, 7] {
            let pf = p as f64;
            let zp = ShellFunction { p, v_min: 0, values: vec![one], value_at_zero: one };
            assert!((g_apply_prime(&zp).re - pf.ln() / (pf - 1.0)).abs() < 1e-15);
            let pzp = ShellFunction { p, v_min: 1, values: vec![one], value_at_zero: one };
            let expected = pf.ln() * (2.0 / pf - 1.0) / (1.0 - 1.0 / pf);
            assert!((g_apply_prime(&pzp).re - expected).abs() < 1e-15);
        }
    }
}
