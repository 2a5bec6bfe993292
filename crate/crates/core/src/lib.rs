//! Exact verification engine for symmetries of the flat Laplacian and for
//! conformally invariant bilinear operators.
//!
//! Flat identities are decided in the normal form of the Weyl algebra of
//! polynomial-coefficient differential operators; curved identities are
//! checked in truncated Taylor jets with honest valid-order bookkeeping.

pub mod error;
pub mod exact;
pub mod weyl;
pub mod tensor;
pub mod ckt;
pub mod symmetry;
pub mod conformal;
pub mod cli;

pub use error::{Error, Result};
