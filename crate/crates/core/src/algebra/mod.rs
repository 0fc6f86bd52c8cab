//! Exact graded linear algebra over `k[t]`.
//!
//! A homogeneous element of a free graded module is stored as its field
//! coefficients only: the power of `t` on each entry is implied by
//! `column degree - row degree`. Column reduction that only adds columns of
//! lower or equal degree into later ones is therefore ordinary Gaussian
//! elimination on the coefficients, and every degree slice of a graded
//! matrix is a prefix of its degree-sorted columns.

mod chain;
mod interval;
mod matrix;
mod module;

pub use chain::{combine, Combo, GradedChain};
pub use interval::{interval_reduce_step, IntervalStep};
pub(crate) use matrix::{add_combo, kernel_combos};
pub use matrix::{free_kernel, intersect, reduce_graded, reduce_generating_set, Basis, GradedMatrix, Reduction};
pub use module::{present, Death, GradedMorphism, Interval, PresentedModule, Presentation};
