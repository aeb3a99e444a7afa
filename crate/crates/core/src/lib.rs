//! Exact and spectral computations on graded nilpotent Lie algebras.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod hellip;
pub mod lagrangian;
pub mod coadjoint;
pub mod liealg;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod spectral;
pub mod symbolrep;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use liealg::{Diagnostic, JordanHolderFlag, LieAlgebra};
pub use linalg::{Matrix, Subspace};
pub use poly::Poly;
pub use rational::Rational;
