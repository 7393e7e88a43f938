//! Measurement contexts of POVMs realised through a system-environment
//! dilation.
//!
//! The crate is `no_std` and only needs `alloc`. Modules:
//!
//! - [`hilbert`]: kets, operators, tensor products, Gram matrices and a
//!   Hermitian eigensolver.
//! - [`dilation`]: POVMs from joint outcomes plus an environment state, the
//!   λ/σ split, and Naimark dilation of rank-one POVMs.
//! - [`povm`]: probabilities, context-selection probabilities, rescaling,
//!   coarse-graining and the share-context relation.
//! - [`contextuality`]: Hardy decompositions and the rescaled inequality.
//! - [`interferometer`]: the three-path interferometer fixture.
//! - [`random`]: Haar-random states, unitaries and rank-one POVMs.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod contextuality;
pub mod dilation;
pub mod error;
pub mod hilbert;
pub mod interferometer;
pub mod povm;
pub mod random;

#[cfg(test)]
mod fixtures;

pub use error::{Error, ErrorClass, Result};
pub use hilbert::{Ket, Operator, Space, DEFAULT_TOL};
pub use num_complex::Complex64;
pub use povm::{DensityMatrix, Payload, Povm, State};
