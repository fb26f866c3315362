//! Clock stage assignment for multiphase SFQ circuits.
//!
//! With `n` phases, a clocked element at stage `sigma` fires at phase
//! `sigma % n` of epoch `sigma / n`. A pulse released at stage `s` must be
//! consumed within the next `n` stages, so an edge spanning `d` stages needs
//! `floor((d - 1) / n)` DFFs. T1 cells additionally need their three input
//! pulses to arrive at distinct stages, which bounds the T1 stage from below
//! and may cost extra DFFs when two inputs share a phase.

mod lp;
mod model;
mod solver;

use thiserror::Error;

use crate::netlist::{NetlistError, NodeId};

pub use lp::{export_lp, import_solution};
pub use model::{build_ilp, build_ilp_with_bound, IlpModel, ModelEdge, Source, T1Group};
pub use solver::{solve_stages, SolveLimits, StageSolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StagingError {
    #[error("phase {phase} out of range for {n} phases")]
    PhaseOutOfRange { phase: u32, n: u32 },
    #[error("phase count must be at least 1")]
    ZeroPhases,
    #[error("stage difference {0} violates fanin ordering")]
    Ordering(i64),
    #[error("T1 input stages {inputs:?} do not admit a T1 at stage {t1}")]
    T1Precondition { inputs: [i64; 3], t1: i64 },
    #[error("T1 cells need at least 3 phases, got {0}")]
    T1NeedsThreePhases(u32),
    #[error("explicit splitter node {0} must be collapsed before staging")]
    Splitter(NodeId),
    #[error("model is infeasible: node {0} cannot be staged within the bound")]
    Infeasible(NodeId),
    #[error("solver stopped without a feasible assignment")]
    Timeout,
    #[error("malformed LP solution: {0}")]
    BadSolution(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

/// `sigma = n * epoch + phase`.
pub fn stage_of(n: u32, epoch: u32, phase: u32) -> Result<u32, StagingError> {
    if n == 0 {
        return Err(StagingError::ZeroPhases);
    }
    if phase >= n {
        return Err(StagingError::PhaseOutOfRange { phase, n });
    }
    Ok(n * epoch + phase)
}

/// Minimum DFFs on a wire spanning `d` stages so every hop is at most `n`.
pub fn edge_dff_bound(d: i64, n: u32) -> Result<u32, StagingError> {
    if n == 0 {
        return Err(StagingError::ZeroPhases);
    }
    if d < 1 {
        return Err(StagingError::Ordering(d));
    }
    Ok(((d - 1) / n as i64) as u32)
}

/// Earliest stage of a T1 whose inputs are released at `inputs` (any order).
pub fn t1_min_stage(inputs: [i64; 3]) -> i64 {
    let mut s = inputs;
    s.sort_unstable();
    (s[0] + 3).max(s[1] + 2).max(s[2] + 1)
}

/// Extra DFFs estimated for a T1 whose sorted input stages share phases
/// inside the T1's consumption window.
pub fn t1_separation_cost(sigmas: [i64; 3], sigma_t1: i64, n: u32) -> Result<u32, StagingError> {
    if n == 0 {
        return Err(StagingError::ZeroPhases);
    }
    let sorted = sigmas[0] <= sigmas[1] && sigmas[1] <= sigmas[2];
    if !sorted || sigma_t1 < t1_min_stage(sigmas) || sigmas[0] < 0 {
        return Err(StagingError::T1Precondition { inputs: sigmas, t1: sigma_t1 });
    }
    Ok(t1_pair_cost(sigmas, sigma_t1, n))
}

/// Same as [`t1_separation_cost`] without precondition checks; sorts internally.
pub(crate) fn t1_pair_cost(sigmas: [i64; 3], sigma_t1: i64, n: u32) -> u32 {
    let mut s = sigmas;
    s.sort_unstable();
    let n = n as i64;
    let phi = |x: i64| x.rem_euclid(n);
    let first = phi(s[0]) == phi(s[1]) && sigma_t1 - s[0] <= n;
    let second = phi(s[1]) == phi(s[2]) && sigma_t1 - s[1] <= n;
    u32::from(first) + u32::from(second)
}

/// Stage of every staged node. PIs sit at stage 0; POs and dead nodes carry none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageAssignment {
    pub n: u32,
    pub sigma: Vec<Option<u32>>,
}

impl StageAssignment {
    pub fn stage(&self, id: NodeId) -> Option<u32> {
        self.sigma.get(id).copied().flatten()
    }

    pub fn phase(&self, id: NodeId) -> Option<u32> {
        self.stage(id).map(|s| s % self.n)
    }

    pub fn epoch(&self, id: NodeId) -> Option<u32> {
        self.stage(id).map(|s| s / self.n)
    }

    pub fn max_stage(&self) -> u32 {
        self.sigma.iter().flatten().copied().max().unwrap_or(0)
    }
}
