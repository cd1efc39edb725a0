//! Brute-force representation on the full `2^N`-dimensional space, used only to
//! certify the symmetric-subspace reduction.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dicke::{ln_binomial, DickeVector};
use crate::error::{Error, Result};

pub const MAX_TENSOR_SPINS: usize = 4;

fn pauli_halves() -> [DMatrix<Complex64>; 3] {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    [
        DMatrix::from_row_slice(2, 2, &[z, h, h, z]),
        DMatrix::from_row_slice(2, 2, &[z, -ih, ih, z]),
        DMatrix::from_row_slice(2, 2, &[h, z, z, -h]),
    ]
}

/// `S_a = Σ_i 1 ⊗ … ⊗ σ_a/2 ⊗ … ⊗ 1` by explicit Kronecker products.
///
/// Basis index bits are spins, most significant bit first, `0 = ↑`.
pub fn full_tensor_operators(n_spins: usize) -> Result<[DMatrix<Complex64>; 3]> {
    if n_spins == 0 || n_spins > MAX_TENSOR_SPINS {
        return Err(Error::Capability {
            what: "full tensor representation",
            max: MAX_TENSOR_SPINS,
            got: n_spins,
        });
    }
    let id2 = DMatrix::<Complex64>::identity(2, 2);
    let dim = 1usize << n_spins;
    let single = pauli_halves();
    Ok(std::array::from_fn(|a| {
        let mut total = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for site in 0..n_spins {
            let mut term = DMatrix::<Complex64>::identity(1, 1);
            for i in 0..n_spins {
                let factor = if i == site { &single[a] } else { &id2 };
                term = term.kronecker(factor);
            }
            total += term;
        }
        total
    }))
}

/// `exp(−i p·S)|↑⟩^⊗N` on the full tensor space, via a dense matrix exponential.
pub fn full_tensor_rotation_oracle(p: [f64; 3], n_spins: usize) -> Result<Vec<Complex64>> {
    let ops = full_tensor_operators(n_spins)?;
    let generator = (&ops[0] * Complex64::new(p[0], 0.0)
        + &ops[1] * Complex64::new(p[1], 0.0)
        + &ops[2] * Complex64::new(p[2], 0.0))
        * Complex64::new(0.0, -1.0);
    let u = generator.exp();
    Ok(u.column(0).iter().copied().collect())
}

/// Overlaps of a `2^N` state with each normalized Dicke state.
pub fn symmetric_projection(state: &[Complex64], n_spins: usize) -> Result<DickeVector> {
    if state.len() != 1usize << n_spins {
        return Err(crate::error::domain("state length must be 2^N"));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_spins + 1];
    for (b, &amp) in state.iter().enumerate() {
        amplitudes[b.count_ones() as usize] += amp;
    }
    for (k, a) in amplitudes.iter_mut().enumerate() {
        *a *= (-0.5 * ln_binomial(n_spins, k)).exp();
    }
    DickeVector::new(n_spins, amplitudes)
}
