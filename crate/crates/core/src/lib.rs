//! T1-aware technology mapping for multiphase-clocked SFQ circuits.
//!
//! The flow detects subcircuits that a T1 flip-flop can implement, rewrites
//! them, assigns a clock stage to every gate, inserts the path-balancing DFFs
//! and checks the result against the original network.

pub mod balancing;
pub mod cuts;
pub mod driver;
pub mod formats;
pub mod netlist;
pub mod staging;
pub mod t1map;
pub mod verify;

pub use netlist::{CostTable, GateKind, Netlist, NetlistError, Node, NodeId, Signal, T1Role};
