//! Pinning-control selection for Boolean regulatory networks.
//!
//! Networks are reduced to target set selection instances whose seed sets
//! are pinning sets driving the network into a chosen attractor.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cnf;
pub mod genlab;
pub mod graph;
pub mod network;
pub mod reduction;
pub mod state;
pub mod structured;
pub mod tss;
pub mod verify;

pub use network::{
    Attractor, InputSet, NetError, NodeId, RegulatoryNetwork, Simulation, UpdateRule,
};
pub use state::StateVector;
pub use tss::{Provenance, TargetSet, TssError, TssInstance};
