use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{cosets, valuation, LevelFunction};
use crate::error::{Error, Result};
use crate::special::is_prime;

/// `Hφ = log|t|·φ + F(log|ξ|·F^{−1}φ)`.
///
/// Requires `φ` to vanish on the coset of 0 and to have total integral 0; then
/// `F^{−1}φ` vanishes on the coset of 0 as well and `Hφ` stays at the level of `φ`.
pub fn conductor_apply(phi: &LevelFunction) -> Result<LevelFunction> {
    let scale = phi.coefficients().iter().map(|c| c.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
    if phi.coefficients()[0].norm() > 1e-12 * scale {
        return Err(Error::Admissibility("conductor needs φ = 0 on the coset of 0".into()));
    }
    if phi.integral().norm() > 1e-12 * scale * phi.coset_volume() {
        return Err(Error::Admissibility("conductor needs total integral 0".into()));
    }
    let log_abs = |f: &LevelFunction| {
        let log_p = (f.p() as f64).ln();
        f.map(|j, c| match f.coset_valuation(j) {
            Some(v) => c * (-(v as f64) * log_p),
            None => Complex64::new(0.0, 0.0),
        })
    };
    let spatial = log_abs(phi);
    let spectral = log_abs(&phi.inverse_fourier()).fourier();
    Ok(spatial.map(|j, c| c + spectral.coefficients()[j as usize]))
}

/// `H` restricted to the cuspidal space `V(p, n)`: level `(0, n)`, supported in
/// `Z_p ∖ p^n Z_p`, zero average on every shell. Dimension `p^n − 1 − n`.
#[derive(Debug, Clone)]
pub struct ConductorMatrix {
    pub p: u64,
    pub n: u32,
    /// Orthonormal basis of `V(p, n)` for the volume-weighted inner product.
    pub basis: Vec<LevelFunction>,
    /// `M_ab = ⟨e_a, H e_b⟩`.
    pub matrix: DMatrix<Complex64>,
}

impl ConductorMatrix {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("cuspidal level n must be at least 1".into()));
        }
        let basis = cuspidal_basis(p, n)?;
        let images = basis.iter().map(conductor_apply).collect::<Result<Vec<_>>>()?;
        let dim = basis.len();
        let mut matrix = DMatrix::zeros(dim, dim);
        for (b, image) in images.iter().enumerate() {
            for (a, e) in basis.iter().enumerate() {
                matrix[(a, b)] = e.inner(image)?;
            }
        }
        Ok(Self { p, n, basis, matrix })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `max |M − M^*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let adjoint = self.matrix.adjoint();
        (&self.matrix - adjoint).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let defect = self.hermitian_defect();
        if defect > 1e-10 {
            return Err(Error::Eigen(format!("matrix is not Hermitian (defect {defect:e})")));
        }
        let hermitian = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        let eigen = SymmetricEigen::try_new(hermitian, 1e-15, 10_000)
            .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
        let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Eigen("non-finite eigenvalue".into()));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(values)
    }
}

/// Helmert contrasts inside each shell `p^e Z_p^×`, `0 ≤ e < n`, scaled to unit
/// weighted norm.
fn cuspidal_basis(p: u64, n: u32) -> Result<Vec<LevelFunction>> {
    let size = cosets(p, n)?;
    let mut shells: Vec<Vec<u64>> = vec![Vec::new(); n as usize];
    for j in 1..size {
        shells[valuation(j, p) as usize].push(j);
    }
    let norm = (size as f64).sqrt();
    let mut basis = Vec::with_capacity(size as usize - 1 - n as usize);
    for shell in &shells {
        for k in 1..shell.len() {
            let weight = norm / ((k * (k + 1)) as f64).sqrt();
            let mut coefficients = vec![Complex64::new(0.0, 0.0); size as usize];
            for &j in &shell[..k] {
                coefficients[j as usize] = Complex64::new(weight, 0.0);
            }
            coefficients[shell[k] as usize] = Complex64::new(-(k as f64) * weight, 0.0);
            basis.push(LevelFunction::new(p, 0, n, coefficients)?);
        }
    }
    debug_assert_eq!(basis.len(), size as usize - 1 - n as usize);
    Ok(basis)
}

/// Ascending eigenvalues of `H` on `V(p, n)`, for `p^n ≤ 2048`.
pub fn cuspidal_spectrum(p: u64, n: u32) -> Result<Vec<f64>> {
    if p.checked_pow(n).is_none_or(|size| size > 2048) {
        return Err(Error::InvalidArgument(format!("{p}^{n} exceeds the desk-scale limit 2048")));
    }
    ConductorMatrix::new(p, n)?.eigenvalues()
}

/// `max_φ ‖H(Iφ) − I(Hφ)‖ / ‖φ‖` over the basis of `V(p, n)`.
pub fn commutation_check(p: u64, n: u32) -> Result<f64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut worst = 0.0f64;
    for phi in cuspidal_basis(p, n)? {
        let left = conductor_apply(&phi.inversion()?)?;
        let right = conductor_apply(&phi)?.inversion()?;
        let (lm, ln) = left.level();
        let (rm, rn) = right.level();
        let (m2, n2) = (lm.max(rm), ln.max(rn));
        let defect = left.refine(m2, n2)?.sub(&right.refine(m2, n2)?)?.norm();
        worst = worst.max(defect / phi.norm());
    }
    Ok(worst)
}
