//! Entropy of flows on normed semigroups, computed exactly where the
//! arithmetic allows it.
//!
//! The crate is `no_std` and only needs `alloc`.  Every concrete entropy
//! (set-theoretic, algebraic, topological, frame, measure) is produced by the
//! same trajectory engine in [`semigroup`] applied to a carrier built by the
//! owning module.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod abelian;
pub mod bridge;
pub mod error;
pub mod logvalue;
pub mod measure;
pub mod semigroup;
pub mod sets;
pub mod shift;
pub mod topo;

#[cfg(test)]
mod testgen;

pub use error::{Error, Result};
pub use logvalue::LogValue;
