//! Exact lattice computations for negative-definite plumbings.
//!
//! This crate mechanizes the integer-lattice bookkeeping used when a plumbed
//! 4-manifold is replaced by a rational homology ball: intersection forms of
//! plumbing graphs, characteristic covectors and their spin-c classes,
//! correction terms (d-invariants) from box maxima, extension of spin-c
//! structures over rational balls, blow-down gluing reports, Goeritz forms of
//! alternating diagrams, and lens-space boundary bookkeeping.
//!
//! Everything is exact (big integers and rationals); no tolerances appear
//! anywhere.

pub mod ball;
pub mod blowdown;
pub mod dinv;
pub mod error;
pub mod fixtures;
pub mod goeritz;
pub mod lens;
pub mod matrix;
pub mod plumbing;
pub mod spinc;

pub use error::{Error, Result};
pub use matrix::{Int, IntMatrix, Rat, RatMatrix};
