//! Pulse-level T1 model, multiphase simulation, equivalence checking and
//! schedule validation.

mod equiv;
mod pulse;
mod sim;
mod validate;

use thiserror::Error;

use crate::netlist::{NetlistError, NodeId};

pub use equiv::{check_equivalence, Counterexample, EquivMode, EquivReport, EXHAUSTIVE_LIMIT};
pub use pulse::{t1_pulse_step, t1_truth, Emitted, T1Input, T1State};
pub use sim::{simulate, Hazard, SimResult};
pub use validate::{validate_schedule, ValidationReport, Violation, ViolationKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("two pulses coincide at stage {stage}")]
    Hazard { stage: i64 },
    #[error("timing: {0}")]
    Timing(String),
    #[error("node {0} has no stage")]
    MissingStage(NodeId),
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("{0} inputs are too many for exhaustive checking")]
    TooManyInputs(usize),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

#[cfg(test)]
mod tests;
