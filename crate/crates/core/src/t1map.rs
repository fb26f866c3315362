//! T1 detection: Boolean matching of 3-leaf cuts against the T1 output
//! family, grouping of same-leaf matches into candidates, area scoring and
//! greedy rewriting.
//!
//! A candidate's area gain is the JJ area of the logic that dies when its
//! roots are replaced, minus the configured cost of the T1 cell that takes
//! over. Splitters are included on both sides, so the gain equals the exact
//! area difference of the rewrite.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use log::debug;
use thiserror::Error;

use crate::cuts::{cut_function, Cut, CutSet};
use crate::netlist::{CostTable, GateKind, Netlist, NetlistError, NodeId, Signal, T1Role};

/// Truth tables of the family members under positive polarity.
pub const FAMILY: [(T1Role, u8); 5] = [
    (T1Role::Sum, 0x96),
    (T1Role::Carry, 0xE8),
    (T1Role::OrQ, 0xFE),
    (T1Role::NCarry, 0x17),
    (T1Role::NOrQ, 0x01),
];

/// Per-leaf input negation; `true` means the leaf enters the T1 complemented.
pub type Polarity = [bool; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct T1Match {
    pub role: T1Role,
    pub polarity: Polarity,
    /// Only XOR3 matches can carry an output complement.
    pub output_complement: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum T1MapError {
    #[error("truth table {0:#04x} does not depend on all three leaves")]
    DegenerateSupport(u8),
}

/// Flips input variable `var` of a 3-input truth table.
pub fn flip_var(tt: u8, var: usize) -> u8 {
    match var {
        0 => ((tt & 0x55) << 1) | ((tt & 0xAA) >> 1),
        1 => ((tt & 0x33) << 2) | ((tt & 0xCC) >> 2),
        2 => ((tt & 0x0F) << 4) | ((tt & 0xF0) >> 4),
        _ => tt,
    }
}

pub fn apply_polarity(tt: u8, polarity: Polarity) -> u8 {
    (0..3).fold(tt, |t, v| if polarity[v] { flip_var(t, v) } else { t })
}

pub fn has_full_support(tt: u8) -> bool {
    (0..3).all(|v| flip_var(tt, v) != tt)
}

pub fn polarity_from_bits(bits: u8) -> Polarity {
    [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0]
}

/// Truth table a root must compute to play `role` in a candidate.
pub fn expected_tt(role: T1Role, polarity: Polarity, output_complement: bool) -> u8 {
    let base = FAMILY.iter().find(|(r, _)| *r == role).map(|(_, t)| *t).unwrap_or(0);
    let tt = apply_polarity(base, polarity);
    if output_complement {
        !tt
    } else {
        tt
    }
}

/// Every (role, polarity, output complement) under which `tt` is realized by a T1 output.
pub fn match_t1_family(tt: u8) -> Result<Vec<T1Match>, T1MapError> {
    if !has_full_support(tt) {
        return Err(T1MapError::DegenerateSupport(tt));
    }
    let mut out = Vec::new();
    for bits in 0..8u8 {
        let polarity = polarity_from_bits(bits);
        for (role, base) in FAMILY {
            let f = apply_polarity(base, polarity);
            if f == tt {
                out.push(T1Match { role, polarity, output_complement: false });
            } else if role == T1Role::Sum && !f == tt {
                out.push(T1Match { role, polarity, output_complement: true });
            }
        }
    }
    Ok(out)
}

/// A same-leaf group of matched cuts proposed for replacement by one T1 cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct T1Candidate {
    pub leaves: [NodeId; 3],
    pub polarity: Polarity,
    pub matches: BTreeMap<T1Role, NodeId>,
    /// The SUM output feeds the root through a complemented edge.
    pub sum_complement: bool,
    pub delta_area: i64,
}

impl T1Candidate {
    pub fn roots(&self) -> Vec<NodeId> {
        self.matches.values().copied().collect()
    }
}

/// Terms of the area gain of a candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaGain {
    /// Area reclaimed under each root, in role order.
    pub mffc_areas: Vec<(NodeId, i64)>,
    /// Cost of the T1 circuit: cell, inverters, and splitter changes.
    pub t1_cost: i64,
    pub delta_area: i64,
    /// Nodes removed by the rewrite.
    pub dead: BTreeSet<NodeId>,
}

fn cone_of(net: &Netlist, root: NodeId, leaves: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if leaves.contains(&id) || !seen.insert(id) {
            continue;
        }
        stack.extend(net.node(id).fanins.iter().map(|s| s.node));
    }
    seen
}

/// Computes the area gain of replacing the candidate's roots with a T1 cell.
pub fn area_gain(net: &Netlist, cand: &T1Candidate, costs: &CostTable) -> Result<AreaGain, NetlistError> {
    let leaves: BTreeSet<NodeId> = cand.leaves.iter().copied().collect();
    let roots = cand.roots();
    let dead = net.dead_set(&roots, &leaves);
    let fanout = net.net_fanout();
    let fanouts = net.fanouts();

    // area of a dead node: its cell plus the splitters on its output nets
    let node_area = |id: NodeId| -> Result<i64, NetlistError> {
        let mut a = net.node_cost(id, costs)? as i64;
        for port in 0..5u8 {
            if let Some(&f) = fanout.get(&(id, port)) {
                a += costs.splitters(f)? as i64;
            }
        }
        Ok(a)
    };

    let mut assigned: BTreeSet<NodeId> = BTreeSet::new();
    let mut mffc_areas = Vec::new();
    for &root in &roots {
        let cone = cone_of(net, root, &leaves);
        let mut sum = 0;
        for &id in dead.iter().filter(|id| cone.contains(id)) {
            if assigned.insert(id) {
                sum += node_area(id)?;
            }
        }
        mffc_areas.push((root, sum));
    }
    if let Some(first) = mffc_areas.first_mut() {
        for &id in &dead {
            if assigned.insert(id) {
                first.1 += node_area(id)?;
            }
        }
    }

    let negated = cand.polarity.iter().filter(|&&p| p).count();
    let roles: BTreeSet<T1Role> = cand.matches.keys().copied().collect();
    let mut t1_cost = costs.t1_cell(negated, &roles) as i64;
    for (&role, &root) in &cand.matches {
        let live_sinks: Vec<NodeId> =
            fanouts[root].iter().map(|&(c, _)| c).filter(|c| !dead.contains(c)).collect();
        let mut port_fanout = live_sinks.len();
        if role == T1Role::Sum && cand.sum_complement {
            // complemented SUM into a PO, DFF or BUF needs one shared inverter
            let needs_inv = live_sinks
                .iter()
                .filter(|&&c| matches!(net.node(c).kind, GateKind::Po | GateKind::Dff | GateKind::Buf))
                .count();
            if needs_inv > 0 {
                t1_cost += costs.gate(GateKind::Not)? as i64;
                t1_cost += costs.splitters(needs_inv)? as i64;
                port_fanout = port_fanout - needs_inv + 1;
            }
        }
        t1_cost += costs.splitters(port_fanout)? as i64;
    }
    for &leaf in &cand.leaves {
        let old = fanout.get(&(leaf, 0)).copied().unwrap_or(0);
        let released = fanouts[leaf].iter().filter(|(c, _)| dead.contains(c)).count();
        let new = old - released + 1;
        t1_cost += costs.splitters(new)? as i64 - costs.splitters(old)? as i64;
    }

    let delta_area = mffc_areas.iter().map(|(_, a)| a).sum::<i64>() - t1_cost;
    Ok(AreaGain { mffc_areas, t1_cost, delta_area, dead })
}

fn mffc_area(net: &Netlist, root: NodeId, leaves: &BTreeSet<NodeId>, costs: &CostTable) -> i64 {
    net.dead_set(&[root], leaves).iter().map(|&id| net.node_cost(id, costs).unwrap_or(0) as i64).sum()
}

/// Buckets matched 3-leaf cuts by (leaves, polarity) into scored candidates,
/// best gain first.
pub fn group_candidates(net: &Netlist, cutset: &CutSet, costs: &CostTable) -> Result<Vec<T1Candidate>, NetlistError> {
    // (leaves, polarity) -> role -> roots
    let mut buckets: BTreeMap<([NodeId; 3], Polarity), BTreeMap<T1Role, Vec<NodeId>>> = BTreeMap::new();
    // leaves -> (root, plain XOR3 output is complemented)
    let mut sums: BTreeMap<[NodeId; 3], Vec<(NodeId, bool)>> = BTreeMap::new();
    for id in net.live_nodes() {
        for cut in cutset.cuts(id) {
            if cut.leaves.len() != 3 || !net.is_live(cut.root) {
                continue;
            }
            let leaves = [cut.leaves[0], cut.leaves[1], cut.leaves[2]];
            let Ok(found) = match_t1_family(cut.tt) else { continue };
            for m in found {
                if m.role == T1Role::Sum {
                    if m.polarity == [false; 3] {
                        sums.entry(leaves).or_default().push((cut.root, m.output_complement));
                    }
                } else {
                    buckets.entry((leaves, m.polarity)).or_default().entry(m.role).or_default().push(cut.root);
                }
            }
        }
    }
    for leaves in sums.keys() {
        if !buckets.keys().any(|(l, _)| l == leaves) {
            buckets.insert((*leaves, [false; 3]), BTreeMap::new());
        }
    }

    let mut out = Vec::new();
    for ((leaves, polarity), roles) in buckets {
        let leaf_set: BTreeSet<NodeId> = leaves.iter().copied().collect();
        let best = |roots: &[NodeId]| -> NodeId {
            *roots
                .iter()
                .max_by_key(|&&r| (mffc_area(net, r, &leaf_set, costs), std::cmp::Reverse(r)))
                .expect("non-empty")
        };
        let mut matches: BTreeMap<T1Role, NodeId> = BTreeMap::new();
        let mut used: BTreeSet<NodeId> = BTreeSet::new();
        for (role, roots) in &roles {
            let r = best(roots);
            if used.insert(r) {
                matches.insert(*role, r);
            }
        }
        let mut sum_complement = false;
        if let Some(s) = sums.get(&leaves) {
            let roots: Vec<NodeId> = s.iter().map(|(r, _)| *r).filter(|r| !used.contains(r)).collect();
            if !roots.is_empty() {
                let r = best(&roots);
                let plain_complement = s.iter().find(|(x, _)| *x == r).map(|(_, c)| *c).unwrap_or(false);
                let parity = polarity.iter().filter(|&&p| p).count() % 2 == 1;
                sum_complement = plain_complement ^ parity;
                matches.insert(T1Role::Sum, r);
            }
        }
        if matches.is_empty() {
            continue;
        }
        let mut cand = T1Candidate { leaves, polarity, matches, sum_complement, delta_area: 0 };
        cand.delta_area = area_gain(net, &cand, costs)?.delta_area;
        if cand.matches.len() >= 2 || cand.delta_area > 0 {
            out.push(cand);
        }
    }
    out.sort_by(|a, b| {
        b.delta_area.cmp(&a.delta_area).then(a.leaves.cmp(&b.leaves)).then(a.polarity.cmp(&b.polarity))
    });
    Ok(out)
}

impl Netlist {
    /// Replaces the candidate's roots with the outputs of a new T1 cell and
    /// removes the logic that becomes dead. Returns the T1 node id.
    pub fn replace_cone(&mut self, cand: &T1Candidate, costs: &CostTable) -> Result<NodeId, NetlistError> {
        for &id in cand.leaves.iter().chain(cand.matches.values()) {
            if !self.is_live(id) {
                return Err(NetlistError::StaleCandidate(id));
            }
        }
        if cand.delta_area <= 0 {
            return Err(NetlistError::NotBeneficial(cand.delta_area));
        }
        let gain = area_gain(self, cand, costs)?;
        let inputs = [0, 1, 2].map(|i| Signal::new(cand.leaves[i]).with_complement(cand.polarity[i]));
        let roles: BTreeSet<T1Role> = cand.matches.keys().copied().collect();
        let t1 = self.add_t1(inputs, roles)?;
        for (&role, &root) in &cand.matches {
            let complement = role == T1Role::Sum && cand.sum_complement;
            self.redirect((root, 0), Signal::t1(t1, role).with_complement(complement));
        }
        for id in gain.dead {
            self.kill(id);
        }
        self.materialize_inversions();
        Ok(t1)
    }
}

/// Outcome of the greedy rewrite.
#[derive(Clone, Debug)]
pub struct RewriteResult {
    pub net: Netlist,
    /// Candidates with a positive initial gain.
    pub found: usize,
    /// Candidates applied.
    pub used: usize,
}

/// Greedy selection in candidate order on the original netlist, then
/// application consumers first. A candidate may use another's root as a leaf;
/// rewriting the consumer first keeps that leaf alive until the producer's
/// T1 takes it over. Each candidate is re-validated and re-scored against the
/// current netlist before it is applied.
pub fn select_and_rewrite(net: &Netlist, cands: &[T1Candidate], costs: &CostTable) -> Result<RewriteResult, NetlistError> {
    let found = cands.iter().filter(|c| c.delta_area > 0).count();

    // nodes removed or replaced by the chosen candidates, and their leaves
    let mut claimed: BTreeSet<NodeId> = BTreeSet::new();
    let mut leaves_in_use: BTreeSet<NodeId> = BTreeSet::new();
    let mut chosen: Vec<&T1Candidate> = Vec::new();
    for cand in cands.iter().filter(|c| c.delta_area > 0) {
        let gain = area_gain(net, cand, costs)?;
        let roots: BTreeSet<NodeId> = cand.matches.values().copied().collect();
        let removed: BTreeSet<NodeId> = gain.dead.union(&roots).copied().collect();
        // a leaf may be another candidate's root but never its interior
        let interior = |id: &NodeId| removed.contains(id) && !roots.contains(id);
        if removed.iter().any(|id| claimed.contains(id))
            || cand.leaves.iter().any(|l| claimed.contains(l) && !is_root_of_chosen(&chosen, *l))
            || leaves_in_use.iter().any(interior)
        {
            continue;
        }
        claimed.extend(removed);
        leaves_in_use.extend(cand.leaves);
        chosen.push(cand);
    }

    let order = net.topo_order()?;
    let mut pos = vec![0usize; net.len()];
    for (i, &id) in order.iter().enumerate() {
        pos[id] = i;
    }
    chosen.sort_by_key(|c| std::cmp::Reverse(c.matches.values().map(|&r| pos[r]).max().unwrap_or(0)));

    let mut work = net.clone();
    let mut consumed: BTreeSet<NodeId> = BTreeSet::new();
    let mut used = 0;
    for cand in chosen {
        let touched = cand.leaves.iter().chain(cand.matches.values());
        if touched.clone().any(|id| consumed.contains(id) || !work.is_live(*id)) {
            continue;
        }
        let leaves = cand.leaves.to_vec();
        let still_valid = cand.matches.iter().all(|(&role, &root)| {
            let complement = role == T1Role::Sum && cand.sum_complement;
            let cut = Cut { root, leaves: leaves.clone(), tt: 0, cone_size: 0 };
            cut_function(&work, &cut).is_ok_and(|tt| tt == expected_tt(role, cand.polarity, complement))
        });
        if !still_valid {
            continue;
        }
        let gain = area_gain(&work, cand, costs)?;
        if gain.delta_area <= 0 || gain.dead.iter().any(|d| consumed.contains(d)) {
            continue;
        }
        let mut fresh = cand.clone();
        fresh.delta_area = gain.delta_area;
        let mut next = work.clone();
        next.replace_cone(&fresh, costs)?;
        if next.topo_order().is_err() {
            debug!("skipping candidate at {:?}: rewrite would create a cycle", cand.leaves);
            continue;
        }
        consumed.extend(gain.dead.iter().copied());
        consumed.extend(cand.matches.values().copied());
        work = next;
        used += 1;
    }
    let (net, _) = work.compact()?;
    Ok(RewriteResult { net, found, used })
}

fn is_root_of_chosen(chosen: &[&T1Candidate], id: NodeId) -> bool {
    chosen.iter().any(|c| c.matches.values().any(|&r| r == id))
}

/// Number of candidates per leaf triple, for reporting.
pub fn candidates_by_leaves(cands: &[T1Candidate]) -> HashMap<[NodeId; 3], usize> {
    let mut m = HashMap::new();
    for c in cands {
        *m.entry(c.leaves).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::enumerate_cuts;

    /// Independent oracle: evaluates each family member minterm by minterm.
    fn oracle_matches(tt: u8) -> BTreeSet<T1Match> {
        let mut out = BTreeSet::new();
        for bits in 0..8u8 {
            let pol = polarity_from_bits(bits);
            for role in T1Role::ALL {
                for oc in [false, true] {
                    if oc && role != T1Role::Sum {
                        continue;
                    }
                    let mut f = 0u8;
                    for m in 0..8u8 {
                        let x = (0..3).map(|i| ((m >> i) & 1 == 1) ^ pol[i]).collect::<Vec<_>>();
                        let ones = x.iter().filter(|&&b| b).count();
                        let v = match role {
                            T1Role::Sum => ones % 2 == 1,
                            T1Role::Carry => ones >= 2,
                            T1Role::OrQ => ones >= 1,
                            T1Role::NCarry => ones < 2,
                            T1Role::NOrQ => ones == 0,
                        };
                        if v ^ oc {
                            f |= 1 << m;
                        }
                    }
                    if f == tt {
                        out.insert(T1Match { role, polarity: pol, output_complement: oc });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn matcher_agrees_with_oracle_on_all_functions() {
        for tt in 0..=255u8 {
            let oracle = oracle_matches(tt);
            match match_t1_family(tt) {
                Ok(m) => assert_eq!(m.into_iter().collect::<BTreeSet<_>>(), oracle, "tt {tt:#04x}"),
                Err(_) => assert!(oracle.is_empty() && !has_full_support(tt)),
            }
        }
    }

    #[test]
    fn family_examples() {
        let plus = [false; 3];
        let m = match_t1_family(0x96).unwrap();
        assert!(m.contains(&T1Match { role: T1Role::Sum, polarity: plus, output_complement: false }));
        let m = match_t1_family(0xE8).unwrap();
        assert!(m.contains(&T1Match { role: T1Role::Carry, polarity: plus, output_complement: false }));
        assert!(m.contains(&T1Match { role: T1Role::NCarry, polarity: [true; 3], output_complement: false }));
        assert_eq!(m.len(), 2);
        assert_eq!(match_t1_family(0xFF), Err(T1MapError::DegenerateSupport(0xFF)));
        for (role, tt) in FAMILY {
            assert_eq!(expected_tt(role, plus, false), tt);
        }
    }

    fn full_adder(net: &mut Netlist, a: Signal, b: Signal, c: Signal) -> (Signal, Signal) {
        let x = net.xor2(a, b);
        let s = net.xor2(x, c);
        let m = net.maj3(a, b, c);
        (s, m)
    }

    fn flat_costs() -> CostTable {
        let mut c = CostTable::default();
        c.gates.insert(GateKind::Splitter, 0);
        c.gates.insert(GateKind::Maj3, 26);
        c
    }

    #[test]
    fn area_gain_examples() {
        let costs = flat_costs();
        let mut net = Netlist::new();
        let [a, b, c] = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let (s, m) = full_adder(&mut net, a, b, c);
        net.add_po(s, "s").unwrap();
        net.add_po(m, "m").unwrap();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let cands = group_candidates(&net, &cs, &costs).unwrap();
        // the all-negated NCARRY bucket also forms but never pays off
        assert_eq!(cands.iter().filter(|c| c.delta_area > 0).count(), 1);
        let cand = &cands[0];
        assert_eq!(cand.matches, [(T1Role::Sum, s.node), (T1Role::Carry, m.node)].into());
        let gain = area_gain(&net, cand, &costs).unwrap();
        assert_eq!(gain.mffc_areas, vec![(s.node, 16), (m.node, 26)]);
        assert_eq!(gain.delta_area, 13);

        // one leaf enters complemented
        let mut net = Netlist::new();
        let [a, b, c] = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let (s, m) = full_adder(&mut net, !a, b, c);
        net.add_po(s, "s").unwrap();
        net.add_po(m, "m").unwrap();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let cands = group_candidates(&net, &cs, &costs).unwrap();
        let best = &cands[0];
        assert_eq!(best.polarity, [true, false, false]);
        assert_eq!(best.delta_area, 4);
        assert!(!best.sum_complement);
    }

    #[test]
    fn single_or3_is_rejected() {
        let costs = flat_costs();
        let mut net = Netlist::new();
        let [a, b, c] = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let o1 = net.or2(a, b);
        let o = net.or2(o1, c);
        net.add_po(o, "o").unwrap();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        assert!(group_candidates(&net, &cs, &costs).unwrap().is_empty());
        let cand = T1Candidate {
            leaves: [a.node, b.node, c.node],
            polarity: [false; 3],
            matches: [(T1Role::OrQ, o.node)].into(),
            sum_complement: false,
            delta_area: 0,
        };
        assert_eq!(area_gain(&net, &cand, &costs).unwrap().delta_area, -13);
    }

    #[test]
    fn single_or3_with_cheap_t1_is_used() {
        let mut costs = flat_costs();
        costs.t1_base = 10;
        let mut net = Netlist::new();
        let [a, b, c] = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let o1 = net.or2(a, b);
        let o = net.or2(o1, c);
        net.add_po(o, "o").unwrap();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let cands = group_candidates(&net, &cs, &costs).unwrap();
        assert_eq!(cands.len(), 1);
        let res = select_and_rewrite(&net, &cands, &costs).unwrap();
        assert_eq!((res.found, res.used), (1, 1));
        let t1 = res.net.live_nodes().find(|&i| res.net.node(i).kind == GateKind::T1).unwrap();
        assert_eq!(res.net.node(t1).t1_outputs, [T1Role::OrQ].into());
        for v in 0..8u64 {
            let ins = [v & 1, (v >> 1) & 1, (v >> 2) & 1];
            assert_eq!(res.net.evaluate_outputs(&ins).unwrap()[0] & 1, (ins[0] | ins[1] | ins[2]) & 1);
        }
    }

    #[test]
    fn rewrite_full_adder() {
        let costs = CostTable::default();
        let mut net = Netlist::new();
        let [a, b, c] = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let (s, m) = full_adder(&mut net, a, b, c);
        net.add_po(s, "s").unwrap();
        net.add_po(m, "m").unwrap();
        let gates_before = net.num_live();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let cands = group_candidates(&net, &cs, &costs).unwrap();
        let gain = area_gain(&net, &cands[0], &costs).unwrap();
        let mut rewritten = net.clone();
        rewritten.replace_cone(&cands[0], &costs).unwrap();
        // both MFFCs (2 XOR2 + MAJ3) replaced by one T1
        assert_eq!(rewritten.num_live(), gates_before - 3 + 1);
        assert_eq!(
            net.area(&costs).unwrap() as i64 - rewritten.area(&costs).unwrap() as i64,
            gain.delta_area
        );
        // stale after the first application
        assert_eq!(rewritten.replace_cone(&cands[0], &costs), Err(NetlistError::StaleCandidate(s.node)));
    }

    #[test]
    fn conflicting_candidates_apply_once() {
        let costs = CostTable::default();
        let mut net = Netlist::new();
        let [a, b, c] = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let (s, m) = full_adder(&mut net, a, b, c);
        net.add_po(s, "s").unwrap();
        net.add_po(m, "m").unwrap();
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let mut cands = group_candidates(&net, &cs, &costs).unwrap();
        let mut dup = cands[0].clone();
        dup.matches.remove(&T1Role::Carry);
        dup.delta_area = 1;
        cands.push(dup);
        let res = select_and_rewrite(&net, &cands, &costs).unwrap();
        assert_eq!((res.found, res.used), (2, 1));
    }

    #[test]
    fn two_disjoint_adders() {
        let costs = CostTable::default();
        let mut net = Netlist::new();
        let p: Vec<Signal> = (0..6).map(|i| net.add_pi(format!("p{i}"))).collect();
        for k in 0..2 {
            let (s, m) = full_adder(&mut net, p[3 * k], p[3 * k + 1], p[3 * k + 2]);
            net.add_po(s, format!("s{k}")).unwrap();
            net.add_po(m, format!("m{k}")).unwrap();
        }
        let cs = enumerate_cuts(&net, 3, 16).unwrap();
        let cands = group_candidates(&net, &cs, &costs).unwrap();
        let positive: Vec<_> = cands.iter().filter(|c| c.delta_area > 0).collect();
        assert_eq!(positive.len(), 2);
        let l0: BTreeSet<_> = positive[0].leaves.into_iter().collect();
        assert!(positive[1].leaves.iter().all(|l| !l0.contains(l)));
    }
}
