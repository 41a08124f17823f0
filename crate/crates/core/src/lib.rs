//! Non-equilibrium steady states of the boundary-driven XXZ spin-1/2 chain
//! and the quantum Fisher information they carry.
//!
//! The crate is `no_std` with `alloc`. Dense operators live on the full
//! `2^n` Hilbert space and are capped at [`model::DENSE_MAX_SITES`] sites;
//! the asymptotic machinery in [`transfer`] works with banded matrices and
//! scales to chains of many thousands of sites.

#![no_std]
// once std is anywhere in the crate graph its inherent float methods win,
// leaving the `Float` imports idle
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fisher;
pub mod lindblad;
pub mod logscalar;
pub mod model;
pub mod mpo;
pub mod transfer;

pub use error::{Error, Result};
pub use logscalar::LogScalar;
pub use model::{ChainParams, DenseOperator, Parameter};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;
