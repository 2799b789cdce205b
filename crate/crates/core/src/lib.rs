//! Coded multicasting for shared-link caching networks with heterogeneous
//! caches and multiple requests per user.
//!
//! The pipeline is: place packets in caches ([`model::rap_place`]), sample
//! demands ([`model::sample_demands`]), build the directed conflict graph
//! ([`graph::ConflictGraph`]), color it with a greedy local-coloring
//! heuristic ([`coloring`]), and turn the coloring into an MDS index code
//! ([`coding`]). [`analysis`] evaluates the limiting rate bounds and
//! [`harness`] drives seeded Monte Carlo experiments.

pub mod analysis;
pub mod coding;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod model;

pub use error::{Error, Result};
