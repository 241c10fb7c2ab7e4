//! Numerical toolkit for near-isometries on truncated Hardy spaces.
//!
//! Finite Blaschke products and their Takenaka–Malmquist bases, a coefficient
//! model of H²(𝔻ⁿ), certification of near-isometries and Shimorin-type
//! conditions, Wold-type decompositions for single operators and doubly
//! commuting tuples, and generator extraction for multiplier-invariant
//! subspaces.

pub mod blaschke;
pub mod cli;
pub mod debranges;
pub mod error;
pub mod gallery;
pub mod hardy;
pub mod json;
pub mod linalg;
pub mod operator;
pub mod wold;

pub use blaschke::{BlaschkeProduct, TmIndex};
pub use error::{Error, Result};
pub use hardy::{CoefVector, MultiplicationOperator, TruncatedHardySpace};
pub use operator::{NearIsometryCertificate, OperatorMatrix, Window};
