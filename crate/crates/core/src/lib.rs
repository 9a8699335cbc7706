//! Finite-model workbench for amalgamation classes and automorphism
//! conjugacy experiments on homogeneous digraphs.
//!
//! The crate builds, at configurable finite truncation, the staged structures
//! that encode a poset (or linear order) into an automorphism of a generic
//! partial order, its three-colored shuffle, or a parity-constrained complete
//! multipartite digraph, and ships the brute-force oracles that verify every
//! construction on small instances.

pub mod analysis;
pub mod error;
pub mod multipartite;
pub mod poset_amalgamation;
pub mod reduction_po;
pub mod shuffle;
pub mod structures;

pub use error::Error;
