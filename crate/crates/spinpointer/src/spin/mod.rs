//! N spin-1/2 particles restricted to the symmetric (Dicke) subspace.
//!
//! Basis index `k` counts flipped spins: `k = 0` is `|↑⟩^⊗N`, i.e. `S_z = N/2`.
//! Single-spin coherent states use `|u⟩ = cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩`.

mod dicke;
mod direction;
mod operators;
mod rotation;
mod tensor;

pub use dicke::{coherent_dicke, dicke_expand, dicke_rotation_matrix, ln_binomial, DickeVector};
pub use direction::{direction_from_angles, score, Direction};
pub use operators::{collective_operators, CollectiveOperators};
pub use rotation::{rotated_up_amplitudes, su2_rotation, SpinHalfRotation};
pub use tensor::{
    full_tensor_operators, full_tensor_rotation_oracle, symmetric_projection, MAX_TENSOR_SPINS,
};

pub use num_complex::Complex64;
