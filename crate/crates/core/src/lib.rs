//! Exact computation of twisted alternating-power dimensions, power
//! operations and iterated characters of permutation representations.

pub mod abelian;
pub mod arith;
pub mod burnside;
pub mod cli;
pub mod cocycle;
pub mod cyclotomic;
pub mod dims;
pub mod error;
pub mod group;
pub mod height1;
pub mod par;
pub mod perm;
pub mod perm_core;
pub mod pi_finite;
pub mod series;
pub mod tuples;
pub mod wreath;

pub use error::{Error, Result};
