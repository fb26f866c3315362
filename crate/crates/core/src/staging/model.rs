use std::collections::HashMap;

use super::{edge_dff_bound, t1_min_stage, t1_pair_cost, StageAssignment, StagingError};
use crate::netlist::{GateKind, Netlist, NodeId};

/// Where a model fanin comes from: a PI pinned at stage 0 or a staged variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Pinned(NodeId),
    Var(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelEdge {
    pub from: Source,
    pub to: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct T1Group {
    pub var: usize,
    pub inputs: [Source; 3],
}

/// Integer program over one stage variable per clocked node.
///
/// Objective: one DFF estimate per edge plus the separation cost of every
/// T1. Constraints: fanin ordering on every edge, the T1 lower bound, and
/// `0 <= sigma <= sigma_max`. The linearized form with auxiliary integer
/// and binary variables is produced by [`super::export_lp`].
#[derive(Clone, Debug)]
pub struct IlpModel {
    pub n: u32,
    pub sigma_max: u32,
    /// Netlist node of each variable, in topological order.
    pub nodes: Vec<NodeId>,
    pub fanins: Vec<Vec<Source>>,
    pub is_t1: Vec<bool>,
    pub edges: Vec<ModelEdge>,
    pub t1s: Vec<T1Group>,
    pub pis: Vec<NodeId>,
    pub(crate) netlist_len: usize,
}

pub fn build_ilp(net: &Netlist, n: u32) -> Result<IlpModel, StagingError> {
    if n == 0 {
        return Err(StagingError::ZeroPhases);
    }
    let depth = net.levels()?.into_iter().max().unwrap_or(0) as u32;
    let t1_count = net.count(GateKind::T1) as u32;
    build_ilp_with_bound(net, n, n * (depth + 3 * t1_count + 1))
}

pub fn build_ilp_with_bound(net: &Netlist, n: u32, sigma_max: u32) -> Result<IlpModel, StagingError> {
    if n == 0 {
        return Err(StagingError::ZeroPhases);
    }
    let order = net.topo_order()?;
    let mut var_of: HashMap<NodeId, usize> = HashMap::new();
    let mut nodes = Vec::new();
    for &id in &order {
        let kind = net.node(id).kind;
        if kind == GateKind::Splitter {
            return Err(StagingError::Splitter(id));
        }
        if kind == GateKind::T1 && n < 3 {
            return Err(StagingError::T1NeedsThreePhases(n));
        }
        if kind.is_clocked() {
            var_of.insert(id, nodes.len());
            nodes.push(id);
        }
    }
    let mut fanins = Vec::with_capacity(nodes.len());
    let mut is_t1 = Vec::with_capacity(nodes.len());
    let mut edges = Vec::new();
    let mut t1s = Vec::new();
    for (v, &id) in nodes.iter().enumerate() {
        let node = net.node(id);
        let srcs: Vec<Source> = node
            .fanins
            .iter()
            .map(|s| var_of.get(&s.node).map(|&u| Source::Var(u)).unwrap_or(Source::Pinned(s.node)))
            .collect();
        for &from in &srcs {
            edges.push(ModelEdge { from, to: v });
        }
        if node.kind == GateKind::T1 {
            t1s.push(T1Group { var: v, inputs: [srcs[0], srcs[1], srcs[2]] });
        }
        is_t1.push(node.kind == GateKind::T1);
        fanins.push(srcs);
    }
    Ok(IlpModel {
        n,
        sigma_max,
        nodes,
        fanins,
        is_t1,
        edges,
        t1s,
        pis: net.inputs().to_vec(),
        netlist_len: net.len(),
    })
}

impl IlpModel {
    pub fn num_vars(&self) -> usize {
        self.nodes.len()
    }

    pub fn source_stage(&self, s: Source, sigma: &[i64]) -> i64 {
        match s {
            Source::Pinned(_) => 0,
            Source::Var(u) => sigma[u],
        }
    }

    /// Lowest stage allowed for variable `v` given the stages of its fanins.
    pub(crate) fn lower_bound(&self, v: usize, stage_of: impl Fn(Source) -> i64) -> i64 {
        let ins: Vec<i64> = self.fanins[v].iter().map(|&s| stage_of(s)).collect();
        if self.is_t1[v] {
            t1_min_stage([ins[0], ins[1], ins[2]])
        } else {
            ins.iter().map(|s| s + 1).max().unwrap_or(1).max(1)
        }
    }

    pub fn is_feasible(&self, sigma: &[i64]) -> bool {
        sigma.len() == self.num_vars()
            && (0..self.num_vars()).all(|v| {
                sigma[v] <= self.sigma_max as i64 && sigma[v] >= self.lower_bound(v, |s| self.source_stage(s, sigma))
            })
    }

    /// Objective value of a feasible assignment.
    pub fn objective(&self, sigma: &[i64]) -> i64 {
        let edges: i64 = self
            .edges
            .iter()
            .map(|e| {
                let d = sigma[e.to] - self.source_stage(e.from, sigma);
                edge_dff_bound(d, self.n).map(i64::from).unwrap_or(i64::MAX / 4)
            })
            .sum();
        let t1: i64 = self
            .t1s
            .iter()
            .map(|g| {
                let ins = g.inputs.map(|s| self.source_stage(s, sigma));
                t1_pair_cost(ins, sigma[g.var], self.n) as i64
            })
            .sum();
        edges + t1
    }

    /// Earliest feasible stage of every variable.
    pub fn asap(&self) -> Vec<i64> {
        let mut sigma = vec![0i64; self.num_vars()];
        for v in 0..self.num_vars() {
            sigma[v] = self.lower_bound(v, |s| self.source_stage(s, &sigma));
        }
        sigma
    }

    /// Minimum number of stages that must follow each variable.
    pub fn tails(&self) -> Vec<i64> {
        let mut tail = vec![0i64; self.num_vars()];
        for v in (0..self.num_vars()).rev() {
            for s in &self.fanins[v] {
                if let Source::Var(u) = *s {
                    tail[u] = tail[u].max(tail[v] + 1);
                }
            }
        }
        tail
    }

    pub fn to_assignment(&self, sigma: &[i64]) -> StageAssignment {
        let mut out = vec![None; self.netlist_len];
        for &pi in &self.pis {
            out[pi] = Some(0);
        }
        for (v, &id) in self.nodes.iter().enumerate() {
            out[id] = Some(sigma[v] as u32);
        }
        StageAssignment { n: self.n, sigma: out }
    }

    /// Variable stages read back from an assignment.
    pub fn from_assignment(&self, a: &StageAssignment) -> Option<Vec<i64>> {
        self.nodes.iter().map(|&id| a.stage(id).map(i64::from)).collect()
    }
}
