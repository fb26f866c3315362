//! Gate-level netlist for SFQ logic.
//!
//! The netlist is a DAG of typed gates connected by possibly complemented
//! signals. T1 cells are multi-output: a [`Signal`] pointing at a T1 node
//! selects one of its outputs through `port` (the index of a [`T1Role`]).
//!
//! Node identifiers are stable across rewrites. Rewriting may append nodes
//! whose id is larger than the id of their consumers, so algorithms walk
//! the graph through [`Netlist::topo_order`] instead of relying on id order.
//! [`Netlist::compact`] renumbers a netlist into topological id order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a node in a [`Netlist`].
pub type NodeId = usize;

/// Gate kinds of the mapped SFQ network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    #[serde(rename = "PI")]
    Pi,
    #[serde(rename = "PO")]
    Po,
    #[serde(rename = "AND2")]
    And2,
    #[serde(rename = "OR2")]
    Or2,
    #[serde(rename = "XOR2")]
    Xor2,
    #[serde(rename = "NOT")]
    Not,
    #[serde(rename = "BUF")]
    Buf,
    #[serde(rename = "MAJ3")]
    Maj3,
    #[serde(rename = "DFF")]
    Dff,
    #[serde(rename = "SPLITTER")]
    Splitter,
    #[serde(rename = "T1")]
    T1,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::Pi,
        GateKind::Po,
        GateKind::And2,
        GateKind::Or2,
        GateKind::Xor2,
        GateKind::Not,
        GateKind::Buf,
        GateKind::Maj3,
        GateKind::Dff,
        GateKind::Splitter,
        GateKind::T1,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Pi => 0,
            GateKind::Not | GateKind::Buf | GateKind::Dff | GateKind::Po | GateKind::Splitter => 1,
            GateKind::And2 | GateKind::Or2 | GateKind::Xor2 => 2,
            GateKind::Maj3 | GateKind::T1 => 3,
        }
    }

    /// Clocked elements receive a stage; PIs, POs and splitters are passive.
    pub fn is_clocked(self) -> bool {
        !matches!(self, GateKind::Pi | GateKind::Po | GateKind::Splitter)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Pi => "PI",
            GateKind::Po => "PO",
            GateKind::And2 => "AND2",
            GateKind::Or2 => "OR2",
            GateKind::Xor2 => "XOR2",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::Maj3 => "MAJ3",
            GateKind::Dff => "DFF",
            GateKind::Splitter => "SPLITTER",
            GateKind::T1 => "T1",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Output roles of a T1 cell.
///
/// SUM, CARRY and ORQ are the native XOR3 / MAJ3 / OR3 outputs; NCARRY and
/// NORQ are the complemented MAJ3 / OR3 outputs realized with an inverter
/// appended to the cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum T1Role {
    #[serde(rename = "SUM")]
    Sum,
    #[serde(rename = "CARRY")]
    Carry,
    #[serde(rename = "ORQ")]
    OrQ,
    #[serde(rename = "NCARRY")]
    NCarry,
    #[serde(rename = "NORQ")]
    NOrQ,
}

impl T1Role {
    pub const ALL: [T1Role; 5] = [T1Role::Sum, T1Role::Carry, T1Role::OrQ, T1Role::NCarry, T1Role::NOrQ];

    pub fn port(self) -> u8 {
        self as u8
    }

    pub fn from_port(port: u8) -> Option<T1Role> {
        T1Role::ALL.get(port as usize).copied()
    }

    /// Inverted outputs need an extra inverter after the cell.
    pub fn is_inverted(self) -> bool {
        matches!(self, T1Role::NCarry | T1Role::NOrQ)
    }

    /// Bit-parallel evaluation over three input words.
    pub fn eval(self, a: u64, b: u64, c: u64) -> u64 {
        let maj = (a & b) | (a & c) | (b & c);
        let or = a | b | c;
        match self {
            T1Role::Sum => a ^ b ^ c,
            T1Role::Carry => maj,
            T1Role::OrQ => or,
            T1Role::NCarry => !maj,
            T1Role::NOrQ => !or,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            T1Role::Sum => "SUM",
            T1Role::Carry => "CARRY",
            T1Role::OrQ => "ORQ",
            T1Role::NCarry => "NCARRY",
            T1Role::NOrQ => "NORQ",
        }
    }
}

impl fmt::Display for T1Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reference to a node output, optionally complemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signal {
    pub node: NodeId,
    /// Output port; always 0 except for T1 nodes, where it is a [`T1Role`] index.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub port: u8,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub complemented: bool,
}

fn is_zero(p: &u8) -> bool {
    *p == 0
}

impl Signal {
    pub fn new(node: NodeId) -> Signal {
        Signal { node, port: 0, complemented: false }
    }

    pub fn t1(node: NodeId, role: T1Role) -> Signal {
        Signal { node, port: role.port(), complemented: false }
    }

    pub fn with_complement(self, complemented: bool) -> Signal {
        Signal { complemented: self.complemented ^ complemented, ..self }
    }

    /// The (node, port) pair this signal reads, ignoring polarity.
    pub fn source(self) -> (NodeId, u8) {
        (self.node, self.port)
    }
}

impl Not for Signal {
    type Output = Signal;
    fn not(self) -> Signal {
        self.with_complement(true)
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complemented {
            write!(f, "!")?;
        }
        write!(f, "n{}", self.node)?;
        if self.port != 0 {
            write!(f, ".{}", self.port)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub kind: GateKind,
    pub fanins: Vec<Signal>,
    /// Roles bound to output nets; only populated for T1 nodes.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub t1_outputs: BTreeSet<T1Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("{kind} expects {expected} fanins, got {got}")]
    ArityMismatch { kind: GateKind, expected: usize, got: usize },
    #[error("fanin refers to missing node {0}")]
    DanglingFanin(NodeId),
    #[error("fanin refers to invalid port {port} of node {node}")]
    InvalidPort { node: NodeId, port: u8 },
    #[error("combinational cycle through node {0}")]
    Cycle(NodeId),
    #[error("no cost entry for {0}")]
    MissingCost(GateKind),
    #[error("T1 cell must bind between 1 and 5 outputs")]
    BadT1Outputs,
    #[error("stale candidate: node {0} was consumed by an earlier rewrite")]
    StaleCandidate(NodeId),
    #[error("candidate does not improve area (delta {0})")]
    NotBeneficial(i64),
}

/// JJ cost of each cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostTable {
    pub gates: BTreeMap<GateKind, u64>,
    /// Full T1 cell with three plain inputs and the SUM/CARRY/ORQ outputs.
    pub t1_base: u64,
    /// Extra inverter per inverted T1 output (NCARRY, NORQ).
    pub inverter_out: u64,
    /// Extra inverter per negated T1 input.
    pub inverter_in: u64,
}

impl Default for CostTable {
    fn default() -> Self {
        let gates = [
            (GateKind::And2, 10),
            (GateKind::Or2, 8),
            (GateKind::Xor2, 8),
            (GateKind::Not, 9),
            (GateKind::Maj3, 23),
            (GateKind::Dff, 6),
            (GateKind::Splitter, 3),
        ]
        .into_iter()
        .collect();
        CostTable { gates, t1_base: 29, inverter_out: 9, inverter_in: 9 }
    }
}

impl CostTable {
    pub fn gate(&self, kind: GateKind) -> Result<u64, NetlistError> {
        match kind {
            GateKind::Pi | GateKind::Po => Ok(0),
            _ => self.gates.get(&kind).copied().ok_or(NetlistError::MissingCost(kind)),
        }
    }

    /// Cost of a T1 cell with `negated_inputs` complemented fanins and the given output roles.
    pub fn t1_cell(&self, negated_inputs: usize, roles: &BTreeSet<T1Role>) -> u64 {
        let inverted = roles.iter().filter(|r| r.is_inverted()).count() as u64;
        self.t1_base + self.inverter_in * negated_inputs as u64 + self.inverter_out * inverted
    }

    /// Splitter tree cost for a net with `fanout` sinks.
    pub fn splitters(&self, fanout: usize) -> Result<u64, NetlistError> {
        if fanout <= 1 {
            return Ok(0);
        }
        Ok(self.gate(GateKind::Splitter)? * (fanout as u64 - 1))
    }
}

/// A combinational SFQ netlist.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Netlist {
    nodes: Vec<Node>,
    live: Vec<bool>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
}

impl Netlist {
    pub fn new() -> Netlist {
        Netlist::default()
    }

    /// Number of node slots, dead ones included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn is_live(&self, id: NodeId) -> bool {
        self.live.get(id).copied().unwrap_or(false)
    }

    pub fn live_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(move |&i| self.live[i])
    }

    pub fn num_live(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    /// Count of live nodes of the given kind.
    pub fn count(&self, kind: GateKind) -> usize {
        self.live_nodes().filter(|&i| self.nodes[i].kind == kind).count()
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    /// PO nodes, in declaration order.
    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn add_pi(&mut self, name: impl Into<String>) -> Signal {
        let id = self.push(Node { kind: GateKind::Pi, fanins: vec![], t1_outputs: BTreeSet::new(), name: Some(name.into()) });
        self.inputs.push(id);
        Signal::new(id)
    }

    pub fn add_po(&mut self, driver: Signal, name: impl Into<String>) -> Result<NodeId, NetlistError> {
        self.check_signal(driver)?;
        let id = self.push(Node { kind: GateKind::Po, fanins: vec![driver], t1_outputs: BTreeSet::new(), name: Some(name.into()) });
        self.outputs.push(id);
        Ok(id)
    }

    /// Appends a single-output gate. PIs, POs and T1 cells have dedicated constructors.
    pub fn add_gate(&mut self, kind: GateKind, fanins: Vec<Signal>) -> Result<NodeId, NetlistError> {
        if fanins.len() != kind.arity() {
            return Err(NetlistError::ArityMismatch { kind, expected: kind.arity(), got: fanins.len() });
        }
        for &s in &fanins {
            self.check_signal(s)?;
        }
        let node = Node { kind, fanins, t1_outputs: BTreeSet::new(), name: None };
        let id = self.push(node);
        match kind {
            GateKind::Pi => self.inputs.push(id),
            GateKind::Po => self.outputs.push(id),
            _ => {}
        }
        Ok(id)
    }

    pub fn add_t1(&mut self, inputs: [Signal; 3], roles: BTreeSet<T1Role>) -> Result<NodeId, NetlistError> {
        if roles.is_empty() {
            return Err(NetlistError::BadT1Outputs);
        }
        for s in inputs {
            self.check_signal(s)?;
        }
        Ok(self.push(Node { kind: GateKind::T1, fanins: inputs.to_vec(), t1_outputs: roles, name: None }))
    }

    /// Appends a node verbatim, including PI/PO bookkeeping. Used by readers.
    pub fn push_node(&mut self, node: Node) -> Result<NodeId, NetlistError> {
        if node.fanins.len() != node.kind.arity() {
            return Err(NetlistError::ArityMismatch { kind: node.kind, expected: node.kind.arity(), got: node.fanins.len() });
        }
        if node.kind == GateKind::T1 && node.t1_outputs.is_empty() {
            return Err(NetlistError::BadT1Outputs);
        }
        for &s in &node.fanins {
            self.check_signal(s)?;
        }
        let kind = node.kind;
        let id = self.push(node);
        match kind {
            GateKind::Pi => self.inputs.push(id),
            GateKind::Po => self.outputs.push(id),
            _ => {}
        }
        Ok(id)
    }

    pub fn and2(&mut self, a: Signal, b: Signal) -> Signal {
        Signal::new(self.add_gate(GateKind::And2, vec![a, b]).expect("valid fanins"))
    }

    pub fn or2(&mut self, a: Signal, b: Signal) -> Signal {
        Signal::new(self.add_gate(GateKind::Or2, vec![a, b]).expect("valid fanins"))
    }

    pub fn xor2(&mut self, a: Signal, b: Signal) -> Signal {
        Signal::new(self.add_gate(GateKind::Xor2, vec![a, b]).expect("valid fanins"))
    }

    pub fn maj3(&mut self, a: Signal, b: Signal, c: Signal) -> Signal {
        Signal::new(self.add_gate(GateKind::Maj3, vec![a, b, c]).expect("valid fanins"))
    }

    pub fn not(&mut self, a: Signal) -> Signal {
        Signal::new(self.add_gate(GateKind::Not, vec![a]).expect("valid fanins"))
    }

    pub fn set_name(&mut self, id: NodeId, name: impl Into<String>) {
        self.nodes[id].name = Some(name.into());
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.live.push(true);
        self.nodes.len() - 1
    }

    fn check_signal(&self, s: Signal) -> Result<(), NetlistError> {
        if !self.is_live(s.node) {
            return Err(NetlistError::DanglingFanin(s.node));
        }
        let node = &self.nodes[s.node];
        let ok = match node.kind {
            GateKind::T1 => T1Role::from_port(s.port).is_some_and(|r| node.t1_outputs.contains(&r)),
            GateKind::Po => false,
            _ => s.port == 0,
        };
        if ok {
            Ok(())
        } else {
            Err(NetlistError::InvalidPort { node: s.node, port: s.port })
        }
    }

    /// Live consumers of every node: `(consumer, fanin index)` pairs.
    pub fn fanouts(&self) -> Vec<Vec<(NodeId, usize)>> {
        let mut fo = vec![Vec::new(); self.nodes.len()];
        for id in self.live_nodes() {
            for (pin, s) in self.nodes[id].fanins.iter().enumerate() {
                fo[s.node].push((id, pin));
            }
        }
        fo
    }

    /// Number of live sinks reading each `(node, port)` output.
    pub fn net_fanout(&self) -> HashMap<(NodeId, u8), usize> {
        let mut fo = HashMap::new();
        for id in self.live_nodes() {
            for s in &self.nodes[id].fanins {
                *fo.entry(s.source()).or_insert(0) += 1;
            }
        }
        fo
    }

    /// Live nodes in topological order (Kahn, ties broken by id).
    pub fn topo_order(&self) -> Result<Vec<NodeId>, NetlistError> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let fo = self.fanouts();
        for id in self.live_nodes() {
            indeg[id] = self.nodes[id].fanins.len();
        }
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<NodeId>> =
            self.live_nodes().filter(|&i| indeg[i] == 0).map(std::cmp::Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(id)) = ready.pop() {
            order.push(id);
            for &(c, _) in &fo[id] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(std::cmp::Reverse(c));
                }
            }
        }
        if order.len() != self.num_live() {
            let stuck = self.live_nodes().find(|&i| indeg[i] > 0).unwrap_or(0);
            return Err(NetlistError::Cycle(stuck));
        }
        Ok(order)
    }

    /// Maximum number of clocked elements on any PI to PO path.
    pub fn logic_depth(&self) -> Result<usize, NetlistError> {
        let levels = self.levels()?;
        Ok(self.outputs.iter().map(|&o| levels[o]).max().unwrap_or(0))
    }

    /// Clocked level of every node (PIs, POs and splitters add nothing).
    pub fn levels(&self) -> Result<Vec<usize>, NetlistError> {
        let order = self.topo_order()?;
        let mut level = vec![0usize; self.nodes.len()];
        for id in order {
            let node = &self.nodes[id];
            let base = node.fanins.iter().map(|s| level[s.node]).max().unwrap_or(0);
            level[id] = base + usize::from(node.kind.is_clocked());
        }
        Ok(level)
    }

    /// Total JJ count: per-cell costs plus one splitter per extra sink on every net.
    pub fn area(&self, costs: &CostTable) -> Result<u64, NetlistError> {
        let mut total = 0;
        for id in self.live_nodes() {
            total += self.node_cost(id, costs)?;
        }
        for (_, f) in self.net_fanout() {
            total += costs.splitters(f)?;
        }
        Ok(total)
    }

    /// Configured cost of a single node, splitters excluded.
    pub fn node_cost(&self, id: NodeId, costs: &CostTable) -> Result<u64, NetlistError> {
        let node = &self.nodes[id];
        match node.kind {
            GateKind::T1 => {
                let neg = node.fanins.iter().filter(|s| s.complemented).count();
                Ok(costs.t1_cell(neg, &node.t1_outputs))
            }
            // explicit splitter nodes are wires; the fanout rule charges them
            GateKind::Splitter => Ok(0),
            k => costs.gate(k),
        }
    }

    /// Maximum fanout-free cone of `root`: the nodes that die once `root` is removed.
    pub fn mffc(&self, root: NodeId) -> BTreeSet<NodeId> {
        self.dead_set(&[root], &BTreeSet::new())
    }

    /// Nodes that die when every root is removed, never crossing `boundary` or PIs.
    pub fn dead_set(&self, roots: &[NodeId], boundary: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
        let mut refs = vec![0usize; self.nodes.len()];
        for id in self.live_nodes() {
            for s in &self.nodes[id].fanins {
                refs[s.node] += 1;
            }
        }
        let mut dead = BTreeSet::new();
        let mut stack: Vec<NodeId> = Vec::new();
        for &r in roots {
            if self.nodes[r].kind != GateKind::Pi && dead.insert(r) {
                stack.push(r);
            }
        }
        while let Some(id) = stack.pop() {
            for s in &self.nodes[id].fanins {
                let f = s.node;
                refs[f] -= 1;
                if refs[f] == 0
                    && !dead.contains(&f)
                    && !boundary.contains(&f)
                    && self.nodes[f].kind != GateKind::Pi
                {
                    dead.insert(f);
                    stack.push(f);
                }
            }
        }
        dead
    }

    /// Marks a node dead. Consumers must have been redirected beforehand.
    pub(crate) fn kill(&mut self, id: NodeId) {
        self.live[id] = false;
    }

    /// Replaces every live reference to `(from.node, from.port)` by `to`,
    /// carrying over the reference's own complement.
    pub(crate) fn redirect(&mut self, from: (NodeId, u8), to: Signal) {
        for id in 0..self.nodes.len() {
            if !self.live[id] {
                continue;
            }
            for s in &mut self.nodes[id].fanins {
                if s.source() == from {
                    *s = to.with_complement(s.complemented);
                }
            }
        }
    }

    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut Node {
        &mut self.nodes[id]
    }

    /// Renumbers live nodes into topological order, dropping dead ones.
    /// Returns the new netlist and the old-to-new id map.
    pub fn compact(&self) -> Result<(Netlist, HashMap<NodeId, NodeId>), NetlistError> {
        let order = self.topo_order()?;
        let mut remap = HashMap::with_capacity(order.len());
        let mut out = Netlist::new();
        // PIs keep their declaration order at the front
        for &pi in &self.inputs {
            if self.live[pi] {
                remap.insert(pi, out.push_node(self.nodes[pi].clone())?);
            }
        }
        for id in order {
            if remap.contains_key(&id) || self.nodes[id].kind == GateKind::Po {
                continue;
            }
            let mut node = self.nodes[id].clone();
            for s in &mut node.fanins {
                s.node = remap[&s.node];
            }
            remap.insert(id, out.push_node(node)?);
        }
        for &po in &self.outputs {
            if self.live[po] {
                let mut node = self.nodes[po].clone();
                node.fanins[0].node = remap[&node.fanins[0].node];
                remap.insert(po, out.push_node(node)?);
            }
        }
        Ok((out, remap))
    }

    /// Removes explicit splitter nodes, wiring their sinks to the splitter's source.
    pub fn collapse_splitters(&mut self) {
        loop {
            let Some(sp) = self.live_nodes().find(|&i| self.nodes[i].kind == GateKind::Splitter) else {
                break;
            };
            let src = self.nodes[sp].fanins[0];
            self.redirect((sp, 0), src);
            self.kill(sp);
        }
    }

    /// Turns complemented fanins of POs, DFFs and BUFs into explicit NOT gates
    /// and bypasses NOT gates fed by a complemented edge. Logic gates and T1
    /// inputs keep their complemented edges.
    pub fn materialize_inversions(&mut self) {
        let double: Vec<NodeId> = self
            .live_nodes()
            .filter(|&i| self.nodes[i].kind == GateKind::Not && self.nodes[i].fanins[0].complemented)
            .collect();
        for id in double {
            let src = !self.nodes[id].fanins[0];
            self.redirect((id, 0), src);
            self.kill(id);
        }
        let mut inverters: HashMap<(NodeId, u8), NodeId> = HashMap::new();
        let ids: Vec<NodeId> = self.live_nodes().collect();
        for id in ids {
            if !matches!(self.nodes[id].kind, GateKind::Po | GateKind::Dff | GateKind::Buf) {
                continue;
            }
            let s = self.nodes[id].fanins[0];
            if !s.complemented {
                continue;
            }
            let inv = *inverters.entry(s.source()).or_insert_with(|| {
                self.nodes.push(Node {
                    kind: GateKind::Not,
                    fanins: vec![Signal { complemented: false, ..s }],
                    t1_outputs: BTreeSet::new(),
                    name: None,
                });
                self.live.push(true);
                self.nodes.len() - 1
            });
            self.nodes[id].fanins[0] = Signal::new(inv);
        }
    }

    /// Bit-parallel evaluation of every node's primary output.
    ///
    /// `inputs[i]` holds 64 patterns for the i-th PI. T1 outputs other than
    /// the one on port 0 are derived on demand by [`Netlist::signal_value`].
    pub fn evaluate(&self, inputs: &[u64]) -> Result<Vec<u64>, NetlistError> {
        let order = self.topo_order()?;
        let mut values = vec![0u64; self.nodes.len()];
        for (i, &pi) in self.inputs.iter().enumerate() {
            values[pi] = inputs.get(i).copied().unwrap_or(0);
        }
        for id in order {
            let node = &self.nodes[id];
            if node.kind == GateKind::Pi {
                continue;
            }
            values[id] = self.eval_node(id, |s| self.signal_value(&values, s));
        }
        Ok(values)
    }

    /// Value of a signal given the per-node values from [`Netlist::evaluate`].
    pub fn signal_value(&self, values: &[u64], s: Signal) -> u64 {
        let node = &self.nodes[s.node];
        let v = if node.kind == GateKind::T1 {
            let [a, b, c] = self.t1_inputs(values, s.node);
            T1Role::from_port(s.port).map(|r| r.eval(a, b, c)).unwrap_or(0)
        } else {
            values[s.node]
        };
        if s.complemented {
            !v
        } else {
            v
        }
    }

    fn t1_inputs(&self, values: &[u64], id: NodeId) -> [u64; 3] {
        let f = &self.nodes[id].fanins;
        [self.signal_value(values, f[0]), self.signal_value(values, f[1]), self.signal_value(values, f[2])]
    }

    /// Evaluates a node's port-0 function with `fanin` supplying fanin values.
    pub(crate) fn eval_node(&self, id: NodeId, mut fanin: impl FnMut(Signal) -> u64) -> u64 {
        let node = &self.nodes[id];
        let mut ins = node.fanins.iter().map(|&s| fanin(s));
        let mut next = || ins.next().unwrap_or(0);
        match node.kind {
            GateKind::Pi => 0,
            GateKind::Po | GateKind::Buf | GateKind::Dff | GateKind::Splitter => next(),
            GateKind::Not => !next(),
            GateKind::And2 => next() & next(),
            GateKind::Or2 => next() | next(),
            GateKind::Xor2 => next() ^ next(),
            GateKind::Maj3 => {
                let (a, b, c) = (next(), next(), next());
                (a & b) | (a & c) | (b & c)
            }
            GateKind::T1 => {
                let (a, b, c) = (next(), next(), next());
                T1Role::from_port(0).map(|r| r.eval(a, b, c)).unwrap_or(0)
            }
        }
    }

    /// Evaluates all POs for 64 patterns at once.
    pub fn evaluate_outputs(&self, inputs: &[u64]) -> Result<Vec<u64>, NetlistError> {
        let values = self.evaluate(inputs)?;
        Ok(self.outputs.iter().map(|&o| values[o]).collect())
    }

    pub fn input_names(&self) -> Vec<String> {
        self.inputs.iter().map(|&i| self.nodes[i].name.clone().unwrap_or_default()).collect()
    }

    pub fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|&i| self.nodes[i].name.clone().unwrap_or_default()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_adder_gates() -> (Netlist, [Signal; 3], Signal, Signal) {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let c = net.add_pi("c");
        let x = net.xor2(a, b);
        let s = net.xor2(x, c);
        let m = net.maj3(a, b, c);
        net.add_po(s, "s").unwrap();
        net.add_po(m, "co").unwrap();
        (net, [a, b, c], s, m)
    }

    #[test]
    fn add_gate_basics() {
        let mut net = Netlist::new();
        assert_eq!(net.add_gate(GateKind::Pi, vec![]).unwrap(), 0);
        let b = net.add_pi("b");
        let x = net.add_gate(GateKind::Xor2, vec![Signal::new(0), b]).unwrap();
        net.add_po(Signal::new(x), "x").unwrap();
        assert_eq!(net.logic_depth().unwrap(), 1);
        assert_eq!(
            net.add_gate(GateKind::And2, vec![b]),
            Err(NetlistError::ArityMismatch { kind: GateKind::And2, expected: 2, got: 1 })
        );
        assert_eq!(net.add_gate(GateKind::Not, vec![Signal::new(42)]), Err(NetlistError::DanglingFanin(42)));
    }

    #[test]
    fn arity_and_clocking() {
        for k in GateKind::ALL {
            let clocked = !matches!(k, GateKind::Pi | GateKind::Po | GateKind::Splitter);
            assert_eq!(k.is_clocked(), clocked, "{k}");
            assert_eq!(GateKind::from_name(k.name()), Some(k));
        }
        assert_eq!(GateKind::T1.arity(), 3);
        assert_eq!(GateKind::Splitter.arity(), 1);
    }

    #[test]
    fn depth_examples() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        net.add_po(a, "a").unwrap();
        assert_eq!(net.logic_depth().unwrap(), 0);

        let mut net = Netlist::new();
        let p: Vec<_> = (0..4).map(|i| net.add_pi(format!("p{i}"))).collect();
        let l = net.xor2(p[0], p[1]);
        let r = net.xor2(p[2], p[3]);
        let t = net.xor2(l, r);
        net.add_po(t, "t").unwrap();
        assert_eq!(net.logic_depth().unwrap(), 2);

        let (fa, _, _, _) = full_adder_gates();
        assert_eq!(fa.logic_depth().unwrap(), 2);
    }

    #[test]
    fn area_of_t1_configurations() {
        let costs = CostTable::default();
        assert_eq!(Netlist::new().area(&costs).unwrap(), 0);

        let mut net = Netlist::new();
        let ins = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let t1 = net.add_t1(ins, [T1Role::Sum, T1Role::Carry].into()).unwrap();
        net.add_po(Signal::t1(t1, T1Role::Sum), "s").unwrap();
        net.add_po(Signal::t1(t1, T1Role::Carry), "c").unwrap();
        assert_eq!(net.area(&costs).unwrap(), 29);

        net.node_mut(t1).t1_outputs.insert(T1Role::NCarry);
        net.add_po(Signal::t1(t1, T1Role::NCarry), "nc").unwrap();
        assert_eq!(net.area(&costs).unwrap(), 38);
    }

    #[test]
    fn area_counts_splitters_and_missing_costs() {
        let (net, _, _, _) = full_adder_gates();
        let costs = CostTable::default();
        // 2 XOR2 + MAJ3, and a,b,c each fan out twice
        assert_eq!(net.area(&costs).unwrap(), 16 + 23 + 3 * 3);
        let mut partial = costs.clone();
        partial.gates.remove(&GateKind::Maj3);
        assert_eq!(net.area(&partial), Err(NetlistError::MissingCost(GateKind::Maj3)));
    }

    #[test]
    fn mffc_examples() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let n1 = net.not(a);
        let n2 = net.not(n1);
        let n3 = net.not(n2);
        let root = net.not(n3);
        net.add_po(root, "o").unwrap();
        assert_eq!(net.mffc(root.node), [n1.node, n2.node, n3.node, root.node].into());

        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let shared = net.and2(a, b);
        let root = net.not(shared);
        let other = net.or2(shared, a);
        net.add_po(root, "r").unwrap();
        net.add_po(other, "o").unwrap();
        assert_eq!(net.mffc(root.node), [root.node].into());

        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let c = net.add_pi("c");
        let x = net.xor2(a, b);
        let top = net.xor2(x, c);
        net.add_po(top, "s").unwrap();
        assert_eq!(net.mffc(top.node), [x.node, top.node].into());
    }

    #[test]
    fn compact_renumbers_topologically() {
        let (mut net, [a, b, c], s, _) = full_adder_gates();
        let t1 = net.add_t1([a, b, c], [T1Role::Sum].into()).unwrap();
        net.redirect((s.node, 0), Signal::t1(t1, T1Role::Sum));
        for id in net.dead_set(&[s.node], &BTreeSet::new()) {
            net.kill(id);
        }
        let (compact, _) = net.compact().unwrap();
        for id in compact.live_nodes() {
            for f in &compact.node(id).fanins {
                assert!(f.node < id);
            }
        }
        assert_eq!(compact.count(GateKind::Xor2), 0);
        assert_eq!(compact.count(GateKind::T1), 1);
    }

    #[test]
    fn evaluation_and_inversions() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let g = net.and2(a, !b);
        net.add_po(!g, "o").unwrap();
        let before = net.evaluate_outputs(&[0b1010, 0b1100]).unwrap()[0];
        net.materialize_inversions();
        assert_eq!(net.count(GateKind::Not), 1);
        assert!(!net.node(net.outputs()[0]).fanins[0].complemented);
        let after = net.evaluate_outputs(&[0b1010, 0b1100]).unwrap()[0];
        assert_eq!(before & 0xF, after & 0xF);
        assert_eq!(after & 0xF, !(0b1010u64 & !0b1100) & 0xF);
    }

    #[test]
    fn cycle_detection() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let g = net.not(a);
        let h = net.not(g);
        net.node_mut(g.node).fanins[0] = h;
        assert!(matches!(net.topo_order(), Err(NetlistError::Cycle(_))));
        assert!(net.logic_depth().is_err());
    }
}
