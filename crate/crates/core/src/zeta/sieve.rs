use crate::error::{Error, Result};

/// Largest integer the sieve accepts.
pub const SIEVE_LIMIT: u64 = 1_000_000;

/// `Λ(n)`: `log p` when `n = p^k`, `k ≥ 1`, else 0.
pub fn lambda_von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (n as f64).ln()
}

/// Prime powers up to a limit with their von Mangoldt weights, ascending.
#[derive(Debug, Clone)]
pub struct VonMangoldtSieve {
    limit: u64,
    entries: Vec<(u64, f64)>,
}

impl VonMangoldtSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SIEVE_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "sieve limit {limit} exceeds {SIEVE_LIMIT}"
            )));
        }
        let size = limit as usize + 1;
        let mut composite = vec![false; size];
        let mut entries = Vec::new();
        for p in 2..size {
            if composite[p] {
                continue;
            }
            for m in (p * p..size).step_by(p) {
                composite[m] = true;
            }
            let log_p = (p as f64).ln();
            let mut q = p as u64;
            while q <= limit {
                entries.push((q, log_p));
                q = match q.checked_mul(p as u64) {
                    Some(next) => next,
                    None => break,
                };
            }
        }
        entries.sort_by_key(|e| e.0);
        Ok(Self { limit, entries })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `(n, Λ(n))` for every prime power `n ≤ limit`.
    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn lambda(&self, n: u64) -> f64 {
        match self.entries.binary_search_by_key(&n, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    /// `Σ_{1<n<X} Λ(n) + Λ(X)/2`, the half weight applying when `X` is
    /// within `1e−9` of a prime power.
    pub fn psi(&self, x: f64) -> Result<f64> {
        if !(x > 1.0) {
            return Err(Error::InvalidArgument(format!("psi needs X > 1, got {x}")));
        }
        if x > self.limit as f64 + 0.5 {
            return Err(Error::InvalidArgument(format!(
                "X = {x} exceeds the sieve limit {}",
                self.limit
            )));
        }
        let nearest = x.round();
        let boundary = (x - nearest).abs() <= 1e-9;
        let mut total = 0.0;
        for &(n, w) in &self.entries {
            let nf = n as f64;
            if boundary && nf == nearest {
                total += 0.5 * w;
            } else if nf < x {
                total += w;
            } else {
                break;
            }
        }
        Ok(total)
    }
}

/// `Σ_{1<n<X} Λ(n) + Λ(X)/2` through a sieve sized to `X`.
pub fn psi_sum(x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("psi needs X > 1, got {x}")));
    }
    let limit = (x + 0.5).floor() as u64;
    VonMangoldtSieve::new(limit.max(2))?.psi(x)
}
