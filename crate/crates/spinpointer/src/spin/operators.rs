use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dicke::DickeVector;
use crate::error::{domain, Result};

/// `S_x, S_y, S_z` for spin `J = N/2` in the Dicke basis.
///
/// All three matrices are tridiagonal; [`CollectiveOperators::expectation`]
/// only visits the band.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveOperators {
    pub n_spins: usize,
    pub sx: DMatrix<Complex64>,
    pub sy: DMatrix<Complex64>,
    pub sz: DMatrix<Complex64>,
}

pub fn collective_operators(n_spins: usize) -> Result<CollectiveOperators> {
    if n_spins == 0 {
        return Err(domain("collective operators need N >= 1"));
    }
    let dim = n_spins + 1;
    let j = 0.5 * n_spins as f64;
    let zero = Complex64::new(0.0, 0.0);
    let mut sx = DMatrix::from_element(dim, dim, zero);
    let mut sy = DMatrix::from_element(dim, dim, zero);
    let mut sz = DMatrix::from_element(dim, dim, zero);
    for k in 0..dim {
        sz[(k, k)] = Complex64::new(j - k as f64, 0.0);
    }
    // S_+ |k⟩ = √(k (N − k + 1)) |k − 1⟩
    for k in 1..dim {
        let raise = ((k * (n_spins - k + 1)) as f64).sqrt();
        sx[(k - 1, k)] = Complex64::new(0.5 * raise, 0.0);
        sx[(k, k - 1)] = Complex64::new(0.5 * raise, 0.0);
        sy[(k - 1, k)] = Complex64::new(0.0, -0.5 * raise);
        sy[(k, k - 1)] = Complex64::new(0.0, 0.5 * raise);
    }
    Ok(CollectiveOperators { n_spins, sx, sy, sz })
}

impl CollectiveOperators {
    /// `(⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩)` in the (not necessarily normalized) state `v`.
    pub fn expectation(&self, v: &DickeVector) -> [f64; 3] {
        let a = v.amplitudes();
        let dim = a.len();
        let mut out = [0.0; 3];
        for (slot, op) in out.iter_mut().zip([&self.sx, &self.sy, &self.sz]) {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                let lo = k.saturating_sub(1);
                let hi = (k + 1).min(dim - 1);
                for l in lo..=hi {
                    acc += a[k].conj() * op[(k, l)] * a[l];
                }
            }
            *slot = acc.re;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{coherent_dicke, direction_from_angles};

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn single_spin_is_half_pauli() {
        let ops = collective_operators(1).unwrap();
        assert!((ops.sx[(0, 1)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((ops.sy[(0, 1)] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((ops.sz[(1, 1)] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn algebra_and_hermiticity() {
        for n in 1..=12 {
            let ops = collective_operators(n).unwrap();
            for m in [&ops.sx, &ops.sy, &ops.sz] {
                assert!(max_abs(&(m - m.adjoint())) < 1e-12);
            }
            let comm = &ops.sx * &ops.sy - &ops.sy * &ops.sx;
            assert!(max_abs(&(comm - ops.sz.map(|z| z * Complex64::new(0.0, 1.0)))) < 1e-12);
            let casimir = &ops.sx * &ops.sx + &ops.sy * &ops.sy + &ops.sz * &ops.sz;
            let j = 0.5 * n as f64;
            let expected = DMatrix::<Complex64>::identity(n + 1, n + 1) * Complex64::new(j * (j + 1.0), 0.0);
            assert!(max_abs(&(casimir - expected)) < 1e-12);
        }
    }

    #[test]
    fn sz_spectrum_for_two_spins() {
        let ops = collective_operators(2).unwrap();
        let diag: Vec<f64> = (0..3).map(|k| ops.sz[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn coherent_expectation_is_half_n_times_direction() {
        let u = direction_from_angles(1.1, 0.7).unwrap();
        let ops = collective_operators(9).unwrap();
        let e = ops.expectation(&coherent_dicke(&u, 9).unwrap());
        let c = u.cartesian();
        for i in 0..3 {
            assert!((e[i] - 4.5 * c[i]).abs() < 1e-12);
        }
    }
}
