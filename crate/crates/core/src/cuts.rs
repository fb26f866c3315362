//! 3-feasible cut enumeration with truth tables.
//!
//! Cuts are built bottom-up by merging the cut sets of a node's fanins.
//! Truth tables are 8-bit words over `(leaf0, leaf1, leaf2)` with `leaf0`
//! as the least significant input, so the projections of the three leaves
//! are `0xAA`, `0xCC` and `0xF0`. Cuts with fewer than three leaves are
//! constant in the unused positions.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::netlist::{GateKind, Netlist, NetlistError, NodeId, Signal};

/// Projection truth tables of leaf 0, 1, 2.
pub const VAR_TT: [u8; 3] = [0xAA, 0xCC, 0xF0];

pub const DEFAULT_CUT_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut {
    pub root: NodeId,
    /// Strictly ascending leaf ids.
    pub leaves: Vec<NodeId>,
    pub tt: u8,
    /// Nodes strictly between the leaves and the root, root included.
    pub cone_size: usize,
}

impl Cut {
    pub fn trivial(root: NodeId) -> Cut {
        Cut { root, leaves: vec![root], tt: VAR_TT[0], cone_size: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.leaves.len() == 1 && self.leaves[0] == self.root
    }

    fn priority(&self) -> (usize, usize, &[NodeId]) {
        (self.leaves.len(), self.cone_size, &self.leaves)
    }
}

/// Per-node bounded cut lists.
#[derive(Clone, Debug, Default)]
pub struct CutSet {
    pub c_max: usize,
    cuts: Vec<Vec<Cut>>,
}

impl CutSet {
    pub fn cuts(&self, node: NodeId) -> &[Cut] {
        self.cuts.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cut> {
        self.cuts.iter().flatten()
    }

    pub fn total(&self) -> usize {
        self.cuts.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("only 3-feasible cuts are supported (k = {0})")]
    UnsupportedK(usize),
    #[error("cut limit must be at least 1")]
    ZeroLimit,
    #[error("leaves do not cut the cone of node {root}: reached {node}")]
    NotACut { root: NodeId, node: NodeId },
    #[error("cut has {0} leaves")]
    TooManyLeaves(usize),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

/// Truth table of `tt` (over `from`) re-expressed over the superset `to`.
fn expand(tt: u8, from: &[NodeId], to: &[NodeId]) -> u8 {
    let pos: Vec<usize> = from.iter().map(|l| to.iter().position(|t| t == l).expect("subset")).collect();
    let mut out = 0u8;
    for m in 0..8u8 {
        let mut sub = 0usize;
        for (i, &p) in pos.iter().enumerate() {
            if m >> p & 1 == 1 {
                sub |= 1 << i;
            }
        }
        if tt >> sub & 1 == 1 {
            out |= 1 << m;
        }
    }
    out
}

fn apply_gate(kind: GateKind, ins: &[u8]) -> u8 {
    match kind {
        GateKind::And2 => ins[0] & ins[1],
        GateKind::Or2 => ins[0] | ins[1],
        GateKind::Xor2 => ins[0] ^ ins[1],
        GateKind::Not => !ins[0],
        GateKind::Maj3 => (ins[0] & ins[1]) | (ins[0] & ins[2]) | (ins[1] & ins[2]),
        _ => ins[0],
    }
}

/// Nodes whose cut list is only the trivial cut: boundaries of the logic
/// cones (PIs, POs, T1 cells) and readers of T1 outputs, whose port cannot
/// be expressed as a node leaf.
fn is_cut_boundary(net: &Netlist, id: NodeId) -> bool {
    let node = net.node(id);
    matches!(node.kind, GateKind::Pi | GateKind::Po | GateKind::T1)
        || node.fanins.iter().any(|s| net.node(s.node).kind == GateKind::T1)
}

fn cone_size(net: &Netlist, root: NodeId, leaves: &[NodeId]) -> usize {
    let mut seen = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if leaves.contains(&id) || !seen.insert(id) {
            continue;
        }
        stack.extend(net.node(id).fanins.iter().map(|s| s.node));
    }
    seen.len()
}

pub fn enumerate_cuts(net: &Netlist, k: usize, c_max: usize) -> Result<CutSet, CutError> {
    if k != 3 {
        return Err(CutError::UnsupportedK(k));
    }
    if c_max == 0 {
        return Err(CutError::ZeroLimit);
    }
    let order = net.topo_order()?;
    let mut cuts: Vec<Vec<Cut>> = vec![Vec::new(); net.len()];
    for id in order {
        if is_cut_boundary(net, id) {
            cuts[id] = vec![Cut::trivial(id)];
            continue;
        }
        let node = net.node(id);
        let mut found: Vec<Cut> = Vec::new();
        let mut seen: BTreeSet<Vec<NodeId>> = BTreeSet::new();
        let lists: Vec<&[Cut]> = node.fanins.iter().map(|s| cuts[s.node].as_slice()).collect();
        let mut idx = vec![0usize; lists.len()];
        'product: loop {
            let picked: Vec<&Cut> = idx.iter().zip(&lists).map(|(&i, l)| &l[i]).collect();
            let mut leaves: Vec<NodeId> = picked.iter().flat_map(|c| c.leaves.iter().copied()).collect();
            leaves.sort_unstable();
            leaves.dedup();
            if leaves.len() <= k && !seen.contains(&leaves) {
                let ins: Vec<u8> = picked
                    .iter()
                    .zip(&node.fanins)
                    .map(|(c, s)| {
                        let t = expand(c.tt, &c.leaves, &leaves);
                        if s.complemented {
                            !t
                        } else {
                            t
                        }
                    })
                    .collect();
                let tt = apply_gate(node.kind, &ins);
                let cone = cone_size(net, id, &leaves);
                seen.insert(leaves.clone());
                found.push(Cut { root: id, leaves, tt, cone_size: cone });
            }
            // advance the mixed-radix counter
            for d in (0..idx.len()).rev() {
                idx[d] += 1;
                if idx[d] < lists[d].len() {
                    continue 'product;
                }
                idx[d] = 0;
            }
            break;
        }
        // drop cuts dominated by a cut on a proper subset of their leaves
        let leaf_sets: Vec<BTreeSet<NodeId>> = found.iter().map(|c| c.leaves.iter().copied().collect()).collect();
        let mut kept: Vec<Cut> = found
            .into_iter()
            .enumerate()
            .filter(|(i, _)| {
                !leaf_sets
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != *i && other.len() < leaf_sets[*i].len() && other.is_subset(&leaf_sets[*i]))
            })
            .map(|(_, c)| c)
            .collect();
        kept.sort_by(|a, b| a.priority().cmp(&b.priority()));
        kept.truncate(c_max.saturating_sub(1));
        kept.insert(0, Cut::trivial(id));
        cuts[id] = kept;
    }
    Ok(CutSet { c_max, cuts })
}

/// Truth table of the cut's cone, by exhaustive simulation over the leaves.
pub fn cut_function(net: &Netlist, cut: &Cut) -> Result<u8, CutError> {
    if cut.leaves.len() > 3 {
        return Err(CutError::TooManyLeaves(cut.leaves.len()));
    }
    let mut memo: std::collections::HashMap<NodeId, u8> = std::collections::HashMap::new();
    for (i, &l) in cut.leaves.iter().enumerate() {
        memo.insert(l, VAR_TT[i]);
    }
    fn visit(
        net: &Netlist,
        root: NodeId,
        id: NodeId,
        memo: &mut std::collections::HashMap<NodeId, u8>,
    ) -> Result<u8, CutError> {
        if let Some(&v) = memo.get(&id) {
            return Ok(v);
        }
        let node = net.node(id);
        if node.kind == GateKind::Pi || !net.is_live(id) {
            return Err(CutError::NotACut { root, node: id });
        }
        let mut ins = Vec::with_capacity(node.fanins.len());
        for &s in &node.fanins {
            ins.push(signal_tt(net, root, s, memo)?);
        }
        let v = match node.kind {
            GateKind::T1 => crate::netlist::T1Role::from_port(0)
                .map(|r| r.eval(ins[0] as u64, ins[1] as u64, ins[2] as u64) as u8)
                .unwrap_or(0),
            k => apply_gate(k, &ins),
        };
        memo.insert(id, v);
        Ok(v)
    }
    fn signal_tt(
        net: &Netlist,
        root: NodeId,
        s: Signal,
        memo: &mut std::collections::HashMap<NodeId, u8>,
    ) -> Result<u8, CutError> {
        let node = net.node(s.node);
        let v = if node.kind == GateKind::T1 && !memo.contains_key(&s.node) {
            let mut ins = [0u64; 3];
            for (i, &f) in node.fanins.iter().enumerate() {
                ins[i] = signal_tt(net, root, f, memo)? as u64;
            }
            let role = crate::netlist::T1Role::from_port(s.port).ok_or(CutError::NotACut { root, node: s.node })?;
            role.eval(ins[0], ins[1], ins[2]) as u8
        } else {
            visit(net, root, s.node, memo)?
        };
        Ok(if s.complemented { !v } else { v })
    }
    visit(net, cut.root, cut.root, &mut memo)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::netlist::Signal;
    use proptest::prelude::*;

    #[test]
    fn pi_has_only_trivial_cut() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        net.add_po(a, "o").unwrap();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        assert_eq!(cs.cuts(a.node), &[Cut::trivial(a.node)]);
        assert_eq!(cut_function(&net, &Cut::trivial(a.node)).unwrap(), 0xAA);
    }

    #[test]
    fn xor2_cuts() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let x = net.xor2(a, b);
        net.add_po(x, "x").unwrap();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let cuts = cs.cuts(x.node);
        assert_eq!(cuts.len(), 2);
        assert!(cuts[0].is_trivial());
        assert_eq!(cuts[1].leaves, vec![a.node, b.node]);
        assert_eq!(cuts[1].tt, 0x66);
    }

    #[test]
    fn xor3_maj3_or3_functions() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let c = net.add_pi("c");
        let x = net.xor2(a, b);
        let s = net.xor2(x, c);
        let ab = net.and2(a, b);
        let aob = net.or2(a, b);
        let t = net.and2(c, aob);
        let m = net.or2(ab, t);
        let o1 = net.or2(a, b);
        let o = net.or2(o1, c);
        for (n, sig) in [s, m, o].iter().enumerate() {
            net.add_po(*sig, format!("o{n}")).unwrap();
        }
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let leaves = vec![a.node, b.node, c.node];
        let tt_of = |root: Signal| cs.cuts(root.node).iter().find(|c| c.leaves == leaves).map(|c| c.tt);
        assert_eq!(tt_of(s), Some(0x96));
        assert_eq!(tt_of(m), Some(0xE8));
        assert_eq!(tt_of(o), Some(0xFE));
        let maj_cut = Cut { root: m.node, leaves: leaves.clone(), tt: 0, cone_size: 0 };
        assert_eq!(cut_function(&net, &maj_cut).unwrap(), 0xE8);
    }

    #[test]
    fn non_cut_is_rejected() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let x = net.and2(a, b);
        net.add_po(x, "x").unwrap();
        let bad = Cut { root: x.node, leaves: vec![a.node], tt: 0, cone_size: 0 };
        assert_eq!(cut_function(&net, &bad), Err(CutError::NotACut { root: x.node, node: b.node }));
        assert_eq!(enumerate_cuts(&net, 4, 16).unwrap_err(), CutError::UnsupportedK(4));
        assert_eq!(enumerate_cuts(&net, 3, 0).unwrap_err(), CutError::ZeroLimit);
    }

    /// Random 2/3-input gate network over `pis` inputs.
    pub(crate) fn random_net(seed: u64, pis: usize, gates: usize) -> Netlist {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut net = Netlist::new();
        let mut sigs: Vec<Signal> = (0..pis).map(|i| net.add_pi(format!("i{i}"))).collect();
        for _ in 0..gates {
            let kind = [GateKind::And2, GateKind::Or2, GateKind::Xor2, GateKind::Maj3, GateKind::Not][rng.gen_range(0..5)];
            let fanins: Vec<Signal> = (0..kind.arity())
                .map(|_| sigs[rng.gen_range(0..sigs.len())].with_complement(rng.gen_bool(0.3)))
                .collect();
            let id = net.add_gate(kind, fanins).unwrap();
            sigs.push(Signal::new(id));
        }
        let n = sigs.len();
        for (i, s) in sigs[n.saturating_sub(3)..].iter().enumerate() {
            net.add_po(*s, format!("o{i}")).unwrap();
        }
        net
    }

    fn is_cut(net: &Netlist, root: NodeId, leaves: &BTreeSet<NodeId>) -> bool {
        let mut stack = vec![root];
        let mut seen = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if leaves.contains(&id) || !seen.insert(id) {
                continue;
            }
            if net.node(id).kind == GateKind::Pi {
                return false;
            }
            stack.extend(net.node(id).fanins.iter().map(|s| s.node));
        }
        true
    }

    /// All minimal cuts with at most three leaves, by subset enumeration.
    fn brute_force_cuts(net: &Netlist, root: NodeId) -> BTreeSet<Vec<NodeId>> {
        let mut tfi = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if tfi.insert(id) {
                stack.extend(net.node(id).fanins.iter().map(|s| s.node));
            }
        }
        let nodes: Vec<NodeId> = tfi.into_iter().collect();
        let mut all = Vec::new();
        for i in 0..nodes.len() {
            all.push(vec![nodes[i]]);
            for j in i + 1..nodes.len() {
                all.push(vec![nodes[i], nodes[j]]);
                for l in j + 1..nodes.len() {
                    all.push(vec![nodes[i], nodes[j], nodes[l]]);
                }
            }
        }
        let cuts: Vec<BTreeSet<NodeId>> =
            all.into_iter().map(|v| v.into_iter().collect()).filter(|s| is_cut(net, root, s)).collect();
        cuts.iter()
            .filter(|c| !cuts.iter().any(|o| o.len() < c.len() && o.is_subset(c)))
            .map(|c| c.iter().copied().collect())
            .collect()
    }

    #[test]
    fn complete_against_brute_force() {
        for seed in 0..40 {
            let net = random_net(seed, 4, 12);
            let cs = enumerate_cuts(&net, 3, usize::MAX).unwrap();
            for id in net.live_nodes() {
                if matches!(net.node(id).kind, GateKind::Pi | GateKind::Po) {
                    continue;
                }
                let ours: BTreeSet<Vec<NodeId>> = cs.cuts(id).iter().map(|c| c.leaves.clone()).collect();
                assert_eq!(ours, brute_force_cuts(&net, id), "seed {seed} node {id}");
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let net = random_net(7, 5, 20);
        let a = enumerate_cuts(&net, 3, 6).unwrap();
        let b = enumerate_cuts(&net, 3, 6).unwrap();
        for id in net.live_nodes() {
            assert_eq!(a.cuts(id), b.cuts(id));
            assert!(a.cuts(id).len() <= 6);
            assert!(a.cuts(id)[0].is_trivial());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn stored_tt_matches_resimulation(seed in any::<u64>(), gates in 1usize..20, limit in 1usize..10) {
            let net = random_net(seed, 5, gates);
            let cs = enumerate_cuts(&net, 3, limit).unwrap();
            for cut in cs.iter() {
                prop_assert!(cut.leaves.windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(cut_function(&net, cut).unwrap(), cut.tt);
            }
        }
    }
}
