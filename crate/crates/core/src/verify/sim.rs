//! Cycle-level simulation of a staged design.
//!
//! Vector `k` leaves the PIs at stage `k * n`. An element at stage `s` fires
//! at `s + k * n` and consumes the pulses released since its previous
//! firing, so with every fanin gap in `[1, n]` its `k`-th firing computes
//! vector `k`. Larger or non-positive gaps make it read another vector, which
//! shows up as a functional mismatch. Before the first and after the last
//! vector the inputs are silent.

use serde::Serialize;

use super::pulse::t_step;
use super::VerifyError;
use crate::balancing::BalancedDesign;
use crate::netlist::{GateKind, Netlist, NodeId, Signal, T1Role};
use crate::staging::StageAssignment;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hazard {
    pub node: NodeId,
    pub vector: usize,
    /// Stage, relative to the vector's launch, at which two pulses coincided.
    pub stage: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimResult {
    /// Per vector, one value per PO.
    pub outputs: Vec<Vec<bool>>,
    pub hazards: Vec<Hazard>,
}

pub(crate) struct LaneHazard {
    pub node: NodeId,
    pub index: usize,
    pub lanes: u64,
    pub stage: i64,
}

pub(crate) struct LaneRun {
    /// Per index, one word per PO.
    pub outputs: Vec<Vec<u64>>,
    pub hazards: Vec<LaneHazard>,
}

fn stage_of(net: &Netlist, stages: &StageAssignment, id: NodeId) -> Result<i64, VerifyError> {
    if net.node(id).kind == GateKind::Pi {
        return Ok(0);
    }
    stages.stage(id).map(i64::from).ok_or(VerifyError::MissingStage(id))
}

struct Values<'a> {
    net: &'a Netlist,
    vals: Vec<Vec<[u64; 3]>>,
    idle: Vec<[u64; 3]>,
}

impl Values<'_> {
    fn read(&self, s: Signal, k: i64) -> u64 {
        let w = usize::try_from(k)
            .ok()
            .and_then(|k| self.vals[s.node].get(k))
            .copied()
            .unwrap_or(self.idle[s.node]);
        let v = if self.net.node(s.node).kind == GateKind::T1 {
            match T1Role::from_port(s.port) {
                Some(T1Role::Sum) => w[0],
                Some(T1Role::Carry) => w[1],
                Some(T1Role::OrQ) => w[2],
                Some(T1Role::NCarry) => !w[1],
                Some(T1Role::NOrQ) => !w[2],
                None => 0,
            }
        } else {
            w[0]
        };
        if s.complemented {
            !v
        } else {
            v
        }
    }
}

/// Runs `pi_words.len()` consecutive firings of the design on 64 lanes at once.
pub(crate) fn simulate_lanes(
    net: &Netlist,
    stages: &StageAssignment,
    pi_words: &[Vec<u64>],
) -> Result<LaneRun, VerifyError> {
    let n = stages.n as i64;
    let len = pi_words.len();
    let order = net.topo_order()?;
    let mut v = Values { net, vals: vec![Vec::new(); net.len()], idle: vec![[0; 3]; net.len()] };
    let mut hazards = Vec::new();

    for &id in &order {
        let node = net.node(id);
        match node.kind {
            GateKind::Po => continue,
            GateKind::Pi => {
                let i = net.inputs().iter().position(|&p| p == id).expect("registered PI");
                v.vals[id] = pi_words.iter().map(|w| [w[i], 0, 0]).collect();
                continue;
            }
            _ => {}
        }
        let sv = stage_of(net, stages, id)?;
        let mut offs = Vec::with_capacity(node.fanins.len());
        let mut rel = Vec::with_capacity(node.fanins.len());
        for f in &node.fanins {
            let su = stage_of(net, stages, f.node)?;
            let off = (sv - su + n - 1).div_euclid(n) - 1;
            offs.push(off);
            rel.push(su + off * n - sv);
        }
        // `None` computes the value while the inputs are silent
        for k in std::iter::once(None).chain((0..len).map(Some)) {
            let read = |slot: usize| match k {
                None => v.read(node.fanins[slot], -1),
                Some(k) => v.read(node.fanins[slot], k as i64 + offs[slot]),
            };
            let word = if node.kind == GateKind::T1 {
                let mut idx = [0usize, 1, 2];
                idx.sort_by_key(|&i| (rel[i], i));
                let (mut st, mut q, mut c) = (0u64, 0u64, 0u64);
                let mut i = 0;
                while i < 3 {
                    let mut pulse = read(idx[i]);
                    let mut clash = 0u64;
                    let mut j = i + 1;
                    while j < 3 && rel[idx[j]] == rel[idx[i]] {
                        let p = read(idx[j]);
                        clash |= pulse & p;
                        pulse |= p;
                        j += 1;
                    }
                    if clash != 0 {
                        if let Some(k) = k {
                            hazards.push(LaneHazard { node: id, index: k, lanes: clash, stage: sv + rel[idx[i]] });
                        }
                    }
                    t_step(&mut st, &mut q, &mut c, pulse);
                    i = j;
                }
                [st, c, q]
            } else {
                let mut slot = 0;
                let w = net.eval_node(id, |_| {
                    slot += 1;
                    read(slot - 1)
                });
                [w, 0, 0]
            };
            match k {
                None => v.idle[id] = word,
                Some(_) => v.vals[id].push(word),
            }
        }
    }
    let outputs = (0..len)
        .map(|k| net.outputs().iter().map(|&po| v.read(net.node(po).fanins[0], k as i64)).collect())
        .collect();
    Ok(LaneRun { outputs, hazards })
}

/// Streams `vectors` through the design, pipelined. Each vector holds one
/// value per PI; the result holds one value per PO for each vector.
pub fn simulate(design: &BalancedDesign, vectors: &[Vec<bool>]) -> Result<SimResult, VerifyError> {
    let net = &design.netlist;
    let npi = net.inputs().len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != npi) {
        return Err(VerifyError::Interface(format!("vector has {} values for {npi} inputs", bad.len())));
    }
    let m = vectors.len();
    let chunk = m.div_ceil(64).max(1);
    let mut words = vec![vec![0u64; npi]; chunk];
    for (i, vec) in vectors.iter().enumerate() {
        let (lane, k) = (i / chunk, i % chunk);
        for (p, &b) in vec.iter().enumerate() {
            words[k][p] |= u64::from(b) << lane;
        }
    }
    let run = simulate_lanes(net, &design.stages, &words)?;
    let outputs = (0..m)
        .map(|i| {
            let (lane, k) = (i / chunk, i % chunk);
            run.outputs[k].iter().map(|w| w >> lane & 1 == 1).collect()
        })
        .collect();
    let mut hazards = Vec::new();
    for h in run.hazards {
        for lane in 0..64 {
            let vector = lane * chunk + h.index;
            if h.lanes >> lane & 1 == 1 && vector < m {
                hazards.push(Hazard { node: h.node, vector, stage: h.stage });
            }
        }
    }
    hazards.sort_by_key(|h| (h.vector, h.node));
    Ok(SimResult { outputs, hazards })
}
