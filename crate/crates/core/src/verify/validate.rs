//! Structural timing checks on a staged design.

use serde::Serialize;

use crate::balancing::BalancedDesign;
use crate::netlist::{GateKind, NodeId};
use crate::staging::t1_min_stage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Gap,
    T1Separation,
    Ordering,
    Hazard,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub node: NodeId,
    pub location: String,
    pub details: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Checks every clocked element against its fanins: stages strictly
/// increase, no gap exceeds `n`, and each T1 sees three distinct release
/// stages no earlier than its lower bound allows.
pub fn validate_schedule(design: &BalancedDesign, n: u32) -> ValidationReport {
    let net = &design.netlist;
    let n = n as i64;
    let mut report = ValidationReport::default();
    let location = |id: NodeId| match &net.node(id).name {
        Some(name) => format!("{} {id} ({name})", net.node(id).kind.name()),
        None => format!("{} {id}", net.node(id).kind.name()),
    };
    let mut push = |kind, id, details: String| {
        report.violations.push(Violation { kind, node: id, location: location(id), details });
    };
    // splitters are transparent wires
    let source_stage = |mut id: NodeId| -> Option<i64> {
        while net.node(id).kind == GateKind::Splitter {
            id = net.node(id).fanins[0].node;
        }
        if net.node(id).kind == GateKind::Pi {
            Some(0)
        } else {
            design.stages.stage(id).map(i64::from)
        }
    };
    if n < 1 {
        return report;
    }
    for id in net.live_nodes() {
        let node = net.node(id);
        if !node.kind.is_clocked() {
            continue;
        }
        let Some(sv) = design.stages.stage(id).map(i64::from) else {
            push(ViolationKind::Ordering, id, "clocked element has no stage".into());
            continue;
        };
        let mut rel = Vec::new();
        for f in &node.fanins {
            let Some(su) = source_stage(f.node) else {
                push(ViolationKind::Ordering, id, format!("fanin {} has no stage", f.node));
                continue;
            };
            let d = sv - su;
            if d < 1 {
                push(ViolationKind::Ordering, id, format!("fanin {} at stage {su}, element at {sv}", f.node));
            } else if d > n {
                push(ViolationKind::Gap, id, format!("fanin {} at stage {su} is {d} stages back, limit {n}", f.node));
            }
            rel.push(su);
        }
        if node.kind == GateKind::T1 && rel.len() == 3 {
            let mut sorted = rel.clone();
            sorted.sort_unstable();
            if sv < t1_min_stage([sorted[0], sorted[1], sorted[2]]) {
                push(ViolationKind::T1Separation, id, format!("release stages {sorted:?} admit no T1 at {sv}"));
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    if rel[i] == rel[j] {
                        push(ViolationKind::T1Separation, id, format!("inputs {i} and {j} both released at {}", rel[i]));
                    }
                }
            }
        }
    }
    report
}
