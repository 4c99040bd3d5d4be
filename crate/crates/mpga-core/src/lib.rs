//! Island-model genetic algorithm (MPGA) machinery: the executable simulator,
//! the cumulant-dynamics theory engine that predicts it, Kullback-Leibler
//! dissimilarity graphs between island populations, and an MPGA/Metropolis
//! hybrid for 2D Ising thermalization.
//!
//! The crate is `no_std` (with `alloc`); everything here is pure computation
//! over in-memory state. IO, file formats and the CLI live in `mpga-cli`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;


pub mod ising;
pub mod klgraph;
pub mod sim;
pub mod rng;

pub mod stats;
pub mod theory;
