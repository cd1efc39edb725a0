use nalgebra::DMatrix;
use num_complex::Complex64;

use super::direction::Direction;
use super::rotation::SpinHalfRotation;
use crate::error::{domain, Result};

/// Largest `N` for which binomial coefficients are computed in exact integer arithmetic.
const EXACT_BINOMIAL_LIMIT: usize = 60;

/// A state of `N` spins in the symmetric subspace, amplitudes indexed by flipped-spin count.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    n_spins: usize,
    amplitudes: Vec<Complex64>,
}

impl DickeVector {
    pub fn new(n_spins: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_spins == 0 {
            return Err(domain("a Dicke vector needs at least one spin"));
        }
        if amplitudes.len() != n_spins + 1 {
            return Err(domain(format!(
                "{} spins need {} amplitudes, got {}",
                n_spins,
                n_spins + 1,
                amplitudes.len()
            )));
        }
        Ok(Self { n_spins, amplitudes })
    }

    /// `|↑⟩^⊗N`.
    pub fn all_up(n_spins: usize) -> Result<Self> {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_spins + 1];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self::new(n_spins, amplitudes)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DickeVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies an `(N+1)×(N+1)` operator given in the Dicke basis.
    pub fn transformed(&self, op: &DMatrix<Complex64>) -> DickeVector {
        let dim = self.amplitudes.len();
        let amplitudes = (0..dim)
            .map(|j| (0..dim).map(|k| op[(j, k)] * self.amplitudes[k]).sum())
            .collect();
        DickeVector { n_spins: self.n_spins, amplitudes }
    }
}

/// `ln C(n, k)` from a running sum of logarithms (log-gamma at integer arguments).
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `C(n, k)` exactly for `n <= 60`, via the log form above that.
fn binomial(n: usize, k: usize) -> f64 {
    if n <= EXACT_BINOMIAL_LIMIT {
        let k = k.min(n - k) as u128;
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n as u128 - i) / (i + 1);
        }
        c as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

/// Expands the product state `(α|↑⟩ + β|↓⟩)^⊗N` into the Dicke basis.
pub fn dicke_expand(alpha: Complex64, beta: Complex64, n_spins: usize) -> Result<DickeVector> {
    if n_spins == 0 {
        return Err(domain("dicke_expand needs N >= 1"));
    }
    let n = n_spins;
    let amplitudes = if n <= EXACT_BINOMIAL_LIMIT || alpha == Complex64::new(0.0, 0.0) || beta == Complex64::new(0.0, 0.0) {
        (0..=n)
            .map(|k| alpha.powu((n - k) as u32) * beta.powu(k as u32) * binomial(n, k).sqrt())
            .collect()
    } else {
        let (la, lb) = (alpha.ln(), beta.ln());
        let mut ln_c = 0.0;
        (0..=n)
            .map(|k| {
                if k > 0 {
                    ln_c += ((n - k + 1) as f64).ln() - (k as f64).ln();
                }
                (la * (n - k) as f64 + lb * k as f64 + 0.5 * ln_c).exp()
            })
            .collect()
    };
    DickeVector::new(n, amplitudes)
}

/// `|u⟩^⊗N` with `|u⟩ = cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩`.
pub fn coherent_dicke(u: &Direction, n_spins: usize) -> Result<DickeVector> {
    let half = 0.5 * u.polar();
    let alpha = Complex64::new(half.cos(), 0.0);
    let beta = Complex64::from_polar(half.sin(), u.azimuth());
    dicke_expand(alpha, beta, n_spins)
}

/// Multiplies two polynomials given by ascending coefficients.
fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The `N`-fold symmetric power of a single-spin unitary, i.e. `U^⊗N` restricted
/// to the Dicke basis.
///
/// Column `k` is read off the generating polynomial
/// `(u₀₀ + u₁₀ t)^{N−k} (u₀₁ + u₁₁ t)^k`, rescaled by `√(C(N,k)/C(N,j))`.
/// Intended for moderate `N` (tens of spins).
pub fn dicke_rotation_matrix(u: &SpinHalfRotation, n_spins: usize) -> Result<DMatrix<Complex64>> {
    if n_spins == 0 {
        return Err(domain("rotation matrix needs N >= 1"));
    }
    let n = n_spins;
    let m = &u.entries;
    let up_image = [m[0][0], m[1][0]];
    let down_image = [m[0][1], m[1][1]];
    let powers = |base: [Complex64; 2]| {
        let mut out = vec![vec![Complex64::new(1.0, 0.0)]];
        for i in 0..n {
            let next = poly_mul(&out[i], &base);
            out.push(next);
        }
        out
    };
    let up_powers = powers(up_image);
    let down_powers = powers(down_image);
    let ln_c: Vec<f64> = (0..=n).map(|k| ln_binomial(n, k)).collect();
    let mut d = DMatrix::from_element(n + 1, n + 1, Complex64::new(0.0, 0.0));
    for k in 0..=n {
        let column = poly_mul(&up_powers[n - k], &down_powers[k]);
        for (j, &c) in column.iter().enumerate() {
            d[(j, k)] = c * (0.5 * (ln_c[k] - ln_c[j])).exp();
        }
    }
    Ok(d)
}
