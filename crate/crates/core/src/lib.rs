//! Spectral community detection on sparse stochastic block models through
//! the distance matrix `D^ℓ` (pairs at graph distance exactly `ℓ`).
//!
//! The pipeline is: sample a graph ([`model`]), build `D^ℓ` ([`graph`]), take
//! its leading eigenvectors ([`spectral`]), and label vertices from the second
//! one ([`reconstruct`]). [`adversary`] perturbs graphs within a vertex budget,
//! [`gw`] simulates the branching process that describes neighbourhoods, and
//! [`diagnostics`] compares neighbourhood statistics with the eigenvectors.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod adversary;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod gw;
pub mod io;
pub mod model;
pub mod reconstruct;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{SparseGraph, SparseSymMatrix};
pub use model::{SbmParams, SpectralProfile, TypedGraphSample};
pub use spectral::EigenPair;
