//! Coherent scattering of a particle off composite targets.
//!
//! All routines work in internal units with ħ = 1; [`units::UnitSystem`]
//! converts to and from SI at the boundary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod born;
pub mod coherence;
pub mod delta1d;
pub mod error;
pub mod potentials;
pub mod quadrature;
pub mod rutherford;
pub mod sampler;
pub mod units;

pub use error::{Error, Result};
