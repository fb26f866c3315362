//! Mapped design as JSON.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::balancing::{BalancedDesign, Metrics};
use crate::netlist::{GateKind, Netlist, Node, NodeId, Signal, T1Role};
use crate::staging::StageAssignment;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignNode {
    pub id: NodeId,
    pub kind: GateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub fanins: Vec<Signal>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<T1Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epoch: Option<u32>,
    /// Release stage of each T1 input, in pin order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_stages: Option<[u32; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DffChain {
    pub source: Signal,
    pub dffs: Vec<NodeId>,
    pub stages: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub format_version: u32,
    pub phases: u32,
    pub optimal: bool,
    pub metrics: Metrics,
    pub nodes: Vec<DesignNode>,
    pub dff_chains: Vec<DffChain>,
}

fn stage_of(d: &BalancedDesign, id: NodeId) -> Option<u32> {
    if d.netlist.node(id).kind == GateKind::Pi {
        Some(0)
    } else {
        d.stages.stage(id)
    }
}

fn chains(d: &BalancedDesign) -> Vec<DffChain> {
    let net = &d.netlist;
    let is_dff = |id: NodeId| net.node(id).kind == GateKind::Dff;
    let mut first_child: HashMap<NodeId, NodeId> = HashMap::new();
    for id in net.live_nodes().filter(|&id| is_dff(id)) {
        first_child.entry(net.node(id).fanins[0].node).or_insert(id);
    }
    let mut out = Vec::new();
    for id in net.live_nodes().filter(|&id| is_dff(id)) {
        let src = net.node(id).fanins[0];
        if is_dff(src.node) && first_child.get(&src.node) == Some(&id) {
            continue;
        }
        let mut dffs = vec![id];
        while let Some(&next) = first_child.get(dffs.last().unwrap()) {
            dffs.push(next);
        }
        let stages = dffs.iter().map(|&x| stage_of(d, x).unwrap_or(0)).collect();
        out.push(DffChain { source: Signal { complemented: false, ..src }, dffs, stages });
    }
    out
}

/// Node ids in the file are positions in a topological order with PIs
/// first and POs last, so reading and writing again reproduces the file.
pub fn write_design(d: &BalancedDesign) -> Result<String, FormatError> {
    let net = &d.netlist;
    let n = d.n;
    let mut order: Vec<NodeId> = net.inputs().to_vec();
    order.extend(net.topo_order()?.into_iter().filter(|&id| !matches!(net.node(id).kind, GateKind::Pi | GateKind::Po)));
    order.extend(net.outputs());
    let pos: HashMap<NodeId, NodeId> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let remap = |s: Signal| Signal { node: pos[&s.node], ..s };
    let nodes = order
        .iter()
        .map(|&id| {
            let node = net.node(id);
            let stage = if node.kind == GateKind::Po { None } else { stage_of(d, id) };
            let input_stages = (node.kind == GateKind::T1).then(|| {
                let f = &node.fanins;
                [0, 1, 2].map(|i| stage_of(d, f[i].node).unwrap_or(0))
            });
            DesignNode {
                id: pos[&id],
                kind: node.kind,
                name: node.name.clone(),
                fanins: node.fanins.iter().map(|&s| remap(s)).collect(),
                outputs: node.t1_outputs.iter().copied().collect(),
                stage,
                phase: stage.map(|s| s % n),
                epoch: stage.map(|s| s / n),
                input_stages,
            }
        })
        .collect();
    let dff_chains = chains(d)
        .into_iter()
        .map(|c| DffChain { source: remap(c.source), dffs: c.dffs.iter().map(|x| pos[x]).collect(), stages: c.stages })
        .collect();
    let file = DesignFile { format_version: FORMAT_VERSION, phases: n, optimal: d.optimal, metrics: d.metrics, nodes, dff_chains };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

/// Reads a design written by [`write_design`]. Node ids are renumbered densely.
pub fn read_design(text: &str) -> Result<BalancedDesign, FormatError> {
    let file: DesignFile = serde_json::from_str(text)?;
    if file.format_version != FORMAT_VERSION {
        return Err(FormatError::Design(format!("unsupported format_version {}", file.format_version)));
    }
    let n = file.phases;
    if n == 0 {
        return Err(FormatError::Design("phases must be at least 1".into()));
    }
    let mut net = Netlist::new();
    let mut map: HashMap<NodeId, NodeId> = HashMap::new();
    let mut sigma = Vec::new();
    for dn in &file.nodes {
        let bad = |msg: String| FormatError::Design(format!("node {}: {msg}", dn.id));
        if let Some(s) = dn.stage {
            if dn.phase != Some(s % n) || dn.epoch != Some(s / n) {
                return Err(bad(format!("stage {s} disagrees with phase {:?} and epoch {:?}", dn.phase, dn.epoch)));
            }
        }
        let fanins = dn
            .fanins
            .iter()
            .map(|s| map.get(&s.node).map(|&m| Signal { node: m, ..*s }).ok_or_else(|| bad(format!("fanin {} not defined earlier", s.node))))
            .collect::<Result<Vec<_>, _>>()?;
        let node = Node { kind: dn.kind, fanins, t1_outputs: dn.outputs.iter().copied().collect::<BTreeSet<_>>(), name: dn.name.clone() };
        let id = net.push_node(node)?;
        if map.insert(dn.id, id).is_some() {
            return Err(bad("duplicate id".into()));
        }
        sigma.push(dn.stage);
    }
    for dn in &file.nodes {
        if let Some(given) = dn.input_stages {
            let f = &net.node(map[&dn.id]).fanins;
            let actual = [0, 1, 2].map(|i| sigma[f[i].node].unwrap_or(0));
            if actual != given {
                return Err(FormatError::Design(format!("node {}: input_stages {given:?}, fanins at {actual:?}", dn.id)));
            }
        }
    }
    Ok(BalancedDesign {
        netlist: net,
        n,
        stages: StageAssignment { n, sigma },
        metrics: file.metrics,
        optimal: file.optimal,
    })
}
