//! Spectral graph parameters over ambiguous alphabets.
//!
//! An ambiguous alphabet is a finite set of letters together with a
//! confusability graph: two distinct letters are adjacent when they can be
//! confused. This crate computes
//!
//! - spectral points of such graphs: the Lovász number, the fractional clique
//!   cover number, and the independence number as a capacity lower bound
//!   ([`spectral`]);
//! - probabilistic refinements `F(G, P)` of those points, exactly for the
//!   fractional clique cover number (the entropy of the clique polytope) and
//!   by type-graph estimates for any point ([`refinement`]);
//! - F-rate brackets of stationary Markov sources and the typical-subset
//!   minimisation behind the generalised equipartition property
//!   ([`markov`], [`aep`]);
//! - Ornstein (d-bar) distances and the continuity estimates they drive
//!   ([`transport`]);
//! - pullback graphs and the hidden-Markov reduction ([`pullback`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and report emission live in the `frate-cli` crate.
//!
//! All logarithms in the public API are base 2.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod aep;
pub mod bitset;
pub mod cliques;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod markov;
pub mod math;
pub mod prob;
pub mod pullback;
pub mod refinement;
pub mod sdp;
pub mod second_order;
pub mod spectral;
pub mod transport;
pub mod words;

pub use error::{Error, Result};
pub use graph::Graph;
pub use markov::MarkovSource;
pub use prob::{Dist, PairDist};
pub use spectral::{SolveReport, SpectralPointId};
pub use words::{Word, WordSpace};
