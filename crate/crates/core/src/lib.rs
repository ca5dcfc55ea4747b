//! Simulation and analysis toolkit for error-corrected field sensing with
//! permutation-invariant (gnu) codes.
//!
//! States live in the symmetric subspace and are stored by Dicke weight. The
//! [`fullspace`] module re-derives the scalable results on the full `2^N`
//! Hilbert space for small `N`.

pub mod codes;
pub mod error;
pub mod fullspace;
pub mod metrology;
pub mod noise;
pub mod optimizer;
pub mod protocols;
pub mod qec;
pub mod symcore;

pub use error::{Result, SymError};
