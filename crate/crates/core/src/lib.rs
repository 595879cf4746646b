//! Finite-dimensional observable algebra over complex Hilbert spaces.
//!
//! The crate provides exact dense-matrix calculus for projection operators and
//! density operators ([`opalg`]), a concrete four-qubit observable family with
//! known algebraic identities ([`ghsz`]), evaluation relations between
//! commuting and non-commuting observables ([`relations`]), joint and
//! conditional probability functionals ([`jointprob`]), sign-assignment
//! enumeration for the associated constraint system ([`contradiction`]),
//! seeded generators for randomized checks ([`random`]), a Born-rule sampler
//! producing outcome supports ([`simulator`]), and a report structure shared
//! by all verification suites ([`report`]).
//!
//! All certification routines take an explicit absolute tolerance compared
//! against the componentwise max-norm; [`DEFAULT_TOL`] is the value used when
//! callers have no reason to choose another.

pub mod contradiction;
pub mod error;
pub mod ghsz;
pub mod jointprob;
pub mod opalg;
pub mod random;
pub mod relations;
pub mod report;
pub mod simulator;

pub use error::{Error, Result};
pub use opalg::{DensityOperator, Operator, Projector, StateVector};

/// Default absolute tolerance for all approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest operator dimension the crate will construct (guards tensor blowup).
pub const MAX_DIM: usize = 1 << 10;
