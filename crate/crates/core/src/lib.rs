//! Exact computational group theory for congruence subgroups of the
//! three-strand braid group.
//!
//! The pipeline runs from braid words through the integral Burau
//! representation and its finite images mod `m`, to Reidemeister–Schreier
//! abelianizations of the kernels, and finally to the holonomy action and
//! torsion tests that decide whether `B₃/[K, K]` is crystallographic or
//! Bieberbach.

pub mod braid;
pub mod burau;
pub mod catalog;
pub mod crystallography;
pub mod error;
pub mod finite_image;
pub mod formulas;
pub mod free_groups;
pub mod matrix;
pub mod rewriting;
pub mod snf;
pub mod verification;

pub use braid::{BraidWord, Letter};
pub use error::{Error, Result};
pub use matrix::{ExactMatrix, IntMatrix, ResidueMatrix};
