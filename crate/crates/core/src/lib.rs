//! Mutually unbiased bases built from entangled states of fixed Schmidt number.
//!
//! States of `C^d ⊗ C^d'` are handled through their `d × d'` coefficient
//! matrices: the Hilbert–Schmidt product `Tr(A†B)` is the state overlap and the
//! matrix rank is the Schmidt number. On top of that correspondence the crate
//! provides
//!
//! - [`matspace`]: dense complex matrices, Kronecker products, singular values;
//! - [`verify`]: SEBk and mutual-unbiasedness certification with structured reports;
//! - [`construct`]: the shift-and-phase MEB, the θ-parameterized partner basis in
//!   `C² ⊗ C³`, prime-dimension MUBs and a catalog of printed families;
//! - [`compose`]: Kronecker composition of family sets and witness recipes;
//! - [`trio`]: the real-`2×3`-submatrix obstruction for complex Hadamard matrices;
//! - [`search`]: numerical probes of the `C² ⊗ C³` parameterization.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod compose;
pub mod construct;
pub mod error;
mod math;
pub mod matspace;
pub mod search;
pub mod trio;
pub mod verify;

pub use error::{Error, Result};
pub use matspace::{ComplexMatrix, StateVector, C64};
pub use verify::{BasisFamily, FamilySet, VerificationReport, VerifyConfig};
