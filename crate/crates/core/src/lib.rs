//! # bistochastic
//!
//! Core of the bistochastic privacy model. A bistochastic (doubly stochastic)
//! matrix is the only protection mechanism: it is applied to an attribute as
//! a randomized-response / PRAM transition matrix, and its entropy rate,
//! measured in bits against the `log2 r` maximum, is the privacy level β.
//!
//! | Module | Contents |
//! |---|---|
//! | [`matrix`] | dense [`Matrix`], [`BistochasticMatrix`] validation, [`Distribution`] |
//! | [`constructors`] | DP randomized response, perfect secrecy, anatomy blocks, circulant, tridiagonal |
//! | [`entropy`] | entropy rate, β (univariate / conservative / joint), ε bound |
//! | [`birkhoff`] | decomposition into weighted permutations, recomposition, sampling |
//! | [`majorization`] | majorization order, `Pᵀp`, reverse mapping |
//! | [`dataset`] | typed attribute columns |
//! | [`pram`] | applying matrices to data and inverting them for frequency estimation |
//!
//! ```
//! use bistochastic::{constructors, entropy};
//!
//! let m = constructors::dp_matrix(12, 1.0).unwrap();
//! let beta = entropy::beta(&m).unwrap();
//! assert!((beta - 0.974).abs() < 1e-3);
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. Randomized operations take an
//! explicit [`rand::Rng`]; nothing reads a global generator.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod birkhoff;
pub mod constructors;
pub mod dataset;
pub mod entropy;
mod error;
mod linalg;
pub mod majorization;
pub mod matrix;
pub mod pram;

pub use birkhoff::{BirkhoffDecomposition, BirkhoffTerm, Permutation};
pub use constructors::AnatomyPartition;
pub use dataset::{AttributeColumn, ColumnData, Dataset};
pub use entropy::{AttributePrivacy, PrivacyMode, PrivacyReport};
pub use error::{ColumnError, ColumnErrors, Error};
pub use matrix::{BistochasticMatrix, Distribution, Matrix};
pub use pram::{ColumnMode, FrequencyEstimate};

pub type Result<T, E = Error> = core::result::Result<T, E>;
