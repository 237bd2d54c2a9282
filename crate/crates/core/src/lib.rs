//! Entanglement detection for finite-dimensional quantum states.
//!
//! The crate covers separability criteria, witness construction, Bell-type
//! operators, multipartite cut analysis and sum-of-squares certificates.
//! Everything is generic over the scalar type; the `*F64` / `*F32` aliases
//! below pick a precision.

pub mod bell;
pub mod catalog;
pub mod criteria;
pub mod multiparty;
pub mod error;
pub mod random;
pub mod scalar;
pub mod sos;
pub mod tensor;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::{CMatrix, CVector, Real, Tolerances};
pub use tensor::{Bipartition, DensityMatrix, Dims, PureState};

pub type DensityMatrixF64 = DensityMatrix<f64>;
pub type DensityMatrixF32 = DensityMatrix<f32>;
pub type PureStateF64 = PureState<f64>;
pub type PureStateF32 = PureState<f32>;
pub type WitnessF64 = witness::Witness<f64>;
pub type WitnessF32 = witness::Witness<f32>;
