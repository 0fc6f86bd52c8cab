//! Persistent homology of covered filtered simplicial complexes.
//!
//! The complex is split along a cover, local persistence is computed on the
//! patches and on every patch intersection, and the local results are merged
//! with the Mayer-Vietoris spectral sequence of the resulting double complex.
//! A classical single-matrix reduction ([`persistence::standard_persistence`])
//! is kept alongside as the reference answer.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the threaded
//! executor and the command line live in the `mvss` crate.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod complex;
pub mod cover;
pub mod error;
pub mod field;
pub mod parallel;
pub mod persistence;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{Coeff, FieldSpec};

/// Filtration grade. Real valued filtrations are discretised by the caller.
pub type Grade = u32;
