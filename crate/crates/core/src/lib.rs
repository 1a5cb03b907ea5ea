//! Verification toolkit for half-liberated noncommutative spheres and their
//! quantum symmetry groups.
//!
//! Symbolic work happens over exact Gaussian rationals ([`scalar`],
//! [`ncpoly`]); proofs are bounded rewrites with replayable certificates
//! ([`rewrite`]); refutations come from finite matrix models ([`models`]).

pub mod dsl;
pub mod error;
pub mod lattice;
pub mod models;
pub mod ncpoly;
pub mod par;
pub mod presentations;
pub mod qisom;
pub mod rewrite;
pub mod scalar;

pub use error::{Error, Result};
pub use ncpoly::{Alphabet, Family, Letter, NCPolynomial, TensorPolynomial, Word};
pub use par::Exec;
pub use scalar::Scalar;
