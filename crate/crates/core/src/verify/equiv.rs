//! Functional comparison of a staged design against a reference netlist.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sim::simulate_lanes;
use super::VerifyError;
use crate::balancing::BalancedDesign;
use crate::netlist::Netlist;

/// Largest input count checked exhaustively by [`EquivMode::auto`].
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivMode {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

impl EquivMode {
    /// Exhaustive up to [`EXHAUSTIVE_LIMIT`] inputs, random otherwise.
    pub fn auto(num_inputs: usize, count: u64, seed: u64) -> EquivMode {
        if num_inputs <= EXHAUSTIVE_LIMIT {
            EquivMode::Exhaustive
        } else {
            EquivMode::Random { count, seed }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub inputs: Vec<(String, bool)>,
    pub expected: Vec<(String, bool)>,
    pub actual: Vec<(String, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivReport {
    pub equal: bool,
    pub vectors: u64,
    pub exhaustive: bool,
    pub hazards: usize,
    pub counterexample: Option<Counterexample>,
}

const LANES: usize = 64;
/// Consecutive vectors streamed through each lane per batch.
const DEPTH: usize = 64;

pub fn check_equivalence(reference: &Netlist, design: &BalancedDesign, mode: EquivMode) -> Result<EquivReport, VerifyError> {
    let mapped = &design.netlist;
    if reference.input_names() != mapped.input_names() || reference.output_names() != mapped.output_names() {
        return Err(VerifyError::Interface(format!(
            "{} inputs / {} outputs against {} / {}",
            reference.inputs().len(),
            reference.outputs().len(),
            mapped.inputs().len(),
            mapped.outputs().len()
        )));
    }
    let npi = reference.inputs().len();
    let (total, exhaustive) = match mode {
        EquivMode::Exhaustive => {
            if npi > 30 {
                return Err(VerifyError::TooManyInputs(npi));
            }
            (1u64 << npi, true)
        }
        EquivMode::Random { count, .. } => (count, false),
    };
    let mut rng = match mode {
        EquivMode::Random { seed, .. } => ChaCha8Rng::seed_from_u64(seed),
        EquivMode::Exhaustive => ChaCha8Rng::seed_from_u64(0),
    };
    let per_batch = (LANES * DEPTH) as u64;
    let mut report = EquivReport { equal: true, vectors: total, exhaustive, hazards: 0, counterexample: None };
    let mut base = 0u64;
    while base < total {
        let batch = (total - base).min(per_batch);
        let depth = (batch as usize).div_ceil(LANES);
        let mut words = vec![vec![0u64; npi]; depth];
        let mut valid = vec![0u64; depth];
        for (k, row) in words.iter_mut().enumerate() {
            for lane in 0..LANES {
                let local = (lane * depth + k) as u64;
                if local >= batch {
                    continue;
                }
                valid[k] |= 1 << lane;
                if exhaustive {
                    let id = base + local;
                    for (i, w) in row.iter_mut().enumerate() {
                        *w |= (id >> i & 1) << lane;
                    }
                }
            }
            if !exhaustive {
                for w in row.iter_mut() {
                    *w = rng.next_u64() & valid[k];
                }
            }
        }
        let run = simulate_lanes(mapped, &design.stages, &words)?;
        for h in &run.hazards {
            report.hazards += (h.lanes & valid[h.index]).count_ones() as usize;
        }
        for k in 0..depth {
            let expect = reference.evaluate_outputs(&words[k])?;
            let got = &run.outputs[k];
            let diff = expect.iter().zip(got).fold(0u64, |acc, (e, g)| acc | (e ^ g)) & valid[k];
            if diff != 0 && report.counterexample.is_none() {
                let lane = diff.trailing_zeros();
                let bit = |w: u64| w >> lane & 1 == 1;
                let pick = |names: Vec<String>, ws: &[u64]| names.into_iter().zip(ws.iter().map(|&w| bit(w))).collect();
                report.equal = false;
                report.counterexample = Some(Counterexample {
                    inputs: pick(reference.input_names(), &words[k]),
                    expected: pick(reference.output_names(), &expect),
                    actual: pick(reference.output_names(), got),
                });
            }
        }
        if !report.equal {
            break;
        }
        base += batch;
    }
    Ok(report)
}
