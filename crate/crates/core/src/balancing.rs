//! DFF insertion for a staged netlist.
//!
//! Every net gets one DFF chain shared by all of its sinks. An ordinary
//! gate at stage `v` reads any chain element released in `[v - n, v - 1]`.
//! A T1 input pin reads an element released at one exact stage, and the
//! three pins of a T1 must use pairwise distinct stages. Once those exact
//! stages are fixed, the cheapest chain follows greedily, so the search is
//! only over T1 pin release stages.

use std::time::Instant;

use log::debug;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{CostTable, GateKind, Netlist, NetlistError, Node, NodeId, Signal};
use crate::staging::{SolveLimits, StageAssignment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BalanceError {
    #[error("node {0} has no stage")]
    MissingStage(NodeId),
    #[error("edge {from} -> {to} does not advance the stage")]
    Ordering { from: NodeId, to: NodeId },
    #[error("T1 {0} input stages leave no distinct release slots")]
    T1Window(NodeId),
    #[error("explicit splitter node {0} must be collapsed first")]
    Splitter(NodeId),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

#[derive(Clone, Debug)]
struct NetReq {
    node: NodeId,
    port: u8,
    stage: i64,
    windows: Vec<(i64, i64)>,
    pins: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Pin {
    t1: NodeId,
    slot: usize,
    group: usize,
    net: usize,
    lo: i64,
    hi: i64,
}

/// Release-stage choice problem for the T1 pins of a staged netlist.
#[derive(Clone, Debug)]
pub struct BalanceModel {
    net: Netlist,
    stages: StageAssignment,
    nets: Vec<NetReq>,
    pins: Vec<Pin>,
    /// Pin indices per T1, in slot order.
    groups: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub dff_count: usize,
    pub jj_area: u64,
    pub depth_cycles: u32,
}

#[derive(Clone, Debug)]
pub struct BalancedDesign {
    pub netlist: Netlist,
    pub n: u32,
    pub stages: StageAssignment,
    pub metrics: Metrics,
    /// Whether every component search finished within its limits.
    pub optimal: bool,
}

/// Stages of the shortest DFF chain leaving `src` that releases at every
/// point and inside every window. Each element sits at most `n` stages after
/// its predecessor.
fn chain(src: i64, n: i64, points: &[i64], windows: &[(i64, i64)]) -> Vec<i64> {
    let mut open: Vec<(i64, i64)> = windows.iter().copied().filter(|&(a, b)| !(a <= src && src <= b)).collect();
    let mut pts: Vec<i64> = points.iter().copied().filter(|&r| r > src).collect();
    pts.sort_unstable();
    pts.dedup();
    let mut next_pt = 0;
    let mut c = src;
    let mut out = Vec::new();
    loop {
        let deadline = open.iter().map(|w| w.1).chain(pts.get(next_pt).copied()).min();
        let Some(deadline) = deadline else { break };
        let x = (c + n).min(deadline);
        out.push(x);
        c = x;
        open.retain(|&(a, b)| !(a <= x && x <= b));
        while pts.get(next_pt).is_some_and(|&r| r <= x) {
            next_pt += 1;
        }
    }
    out
}

pub fn build_csp(net: &Netlist, stages: &StageAssignment) -> Result<BalanceModel, BalanceError> {
    let n = stages.n as i64;
    let stage = |id: NodeId| -> Result<i64, BalanceError> {
        if net.node(id).kind == GateKind::Pi {
            return Ok(0);
        }
        stages.stage(id).map(i64::from).ok_or(BalanceError::MissingStage(id))
    };
    let mut index = std::collections::HashMap::new();
    let mut nets: Vec<NetReq> = Vec::new();
    let mut pins = Vec::new();
    let mut groups = Vec::new();
    let mut net_of = |nets: &mut Vec<NetReq>, s: Signal, st: i64| -> usize {
        *index.entry(s.source()).or_insert_with(|| {
            nets.push(NetReq { node: s.node, port: s.port, stage: st, windows: Vec::new(), pins: Vec::new() });
            nets.len() - 1
        })
    };
    for id in net.topo_order()? {
        let node = net.node(id);
        match node.kind {
            GateKind::Splitter => return Err(BalanceError::Splitter(id)),
            GateKind::Pi | GateKind::Po => continue,
            _ => {}
        }
        let sv = stage(id)?;
        let mut group = Vec::new();
        let mut srcs = Vec::new();
        for (slot, s) in node.fanins.iter().enumerate() {
            let su = stage(s.node)?;
            if sv - su < 1 {
                return Err(BalanceError::Ordering { from: s.node, to: id });
            }
            let k = net_of(&mut nets, *s, su);
            if node.kind == GateKind::T1 {
                let p = pins.len();
                pins.push(Pin { t1: id, slot, group: groups.len(), net: k, lo: su.max(sv - n), hi: sv - 1 });
                nets[k].pins.push(p);
                group.push(p);
                srcs.push(su);
            } else {
                nets[k].windows.push((sv - n, sv - 1));
            }
        }
        if node.kind == GateKind::T1 {
            srcs.sort_unstable();
            if sv < crate::staging::t1_min_stage([srcs[0], srcs[1], srcs[2]]) || n < 3 {
                return Err(BalanceError::T1Window(id));
            }
            groups.push(group);
        }
    }
    for &po in net.outputs() {
        let s = net.node(po).fanins[0];
        let su = stage(s.node)?;
        net_of(&mut nets, s, su);
    }
    Ok(BalanceModel { net: net.clone(), stages: stages.clone(), nets, pins, groups })
}

struct Search<'a> {
    m: &'a BalanceModel,
    n: i64,
    value: Vec<Option<i64>>,
    cost: Vec<usize>,
}

impl Search<'_> {
    fn net_chain(&self, k: usize) -> Vec<i64> {
        let req = &self.m.nets[k];
        let mut points = Vec::new();
        let mut windows = req.windows.clone();
        for &p in &req.pins {
            match self.value[p] {
                Some(r) => points.push(r),
                None => windows.push((self.m.pins[p].lo, self.m.pins[p].hi)),
            }
        }
        chain(req.stage, self.n, &points, &windows)
    }

    fn refresh(&mut self, k: usize) -> isize {
        let old = self.cost[k];
        self.cost[k] = self.net_chain(k).len();
        self.cost[k] as isize - old as isize
    }

    fn taken(&self, p: usize, r: i64) -> bool {
        self.m.groups[self.m.pins[p].group]
            .iter().any(|&q| q != p && self.value[q] == Some(r))
    }
}

/// Chooses T1 pin release stages minimizing the total DFF count, then
/// inserts the chains.
pub fn solve_balancing(model: &BalanceModel, limits: &SolveLimits) -> Result<BalancedDesign, BalanceError> {
    let n = model.stages.n as i64;
    let mut s = Search { m: model, n, value: vec![None; model.pins.len()], cost: vec![0; model.nets.len()] };
    for k in 0..model.nets.len() {
        s.refresh(k);
    }

    // components: pins linked through a shared net or a shared T1
    let mut parent: Vec<usize> = (0..model.pins.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let links = model.nets.iter().map(|r| &r.pins).chain(model.groups.iter());
    for list in links {
        for w in list.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for p in 0..model.pins.len() {
        let r = find(&mut parent, p);
        comps.entry(r).or_default().push(p);
    }

    let start = Instant::now();
    let mut optimal = true;
    for pins in comps.values() {
        optimal &= solve_component(&mut s, pins, limits, start);
    }
    debug!("balancing: {} pins, optimal {optimal}", model.pins.len());
    let values: Vec<i64> = s.value.iter().map(|v| v.expect("assigned")).collect();
    Ok(materialize(model, |p| values[p], |k| s.net_chain(k), optimal))
}

/// Depth-first search over one component. Values are tried cheapest first,
/// so the first leaf is the greedy solution. Returns whether it finished.
fn solve_component(s: &mut Search, pins: &[usize], limits: &SolveLimits, start: Instant) -> bool {
    let comp_nets: Vec<usize> = {
        let mut v: Vec<usize> = pins.iter().map(|&p| s.m.pins[p].net).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let total = |s: &Search| comp_nets.iter().map(|&k| s.cost[k]).sum::<usize>();
    let mut best: Option<(usize, Vec<i64>)> = None;
    let mut explored = 0u64;
    let mut complete = true;
    // stack of candidate lists per depth
    let mut cands: Vec<Vec<i64>> = Vec::with_capacity(pins.len());
    let mut depth = 0usize;
    let root_bound = total(s);

    let order_values = |s: &mut Search, p: usize| -> Vec<i64> {
        let pin = s.m.pins[p];
        let mut scored = Vec::new();
        for r in (pin.lo..=pin.hi).rev() {
            if s.taken(p, r) {
                continue;
            }
            s.value[p] = Some(r);
            let c = s.net_chain(pin.net).len();
            scored.push((c, std::cmp::Reverse(r)));
        }
        s.value[p] = None;
        scored.sort();
        scored.into_iter().map(|(_, r)| r.0).rev().collect()
    };

    if pins.is_empty() {
        return true;
    }
    let first = order_values(s, pins[0]);
    cands.push(first);
    loop {
        let p = pins[depth];
        let net = s.m.pins[p].net;
        if s.value[p].is_some() {
            s.value[p] = None;
            s.refresh(net);
        }
        let Some(r) = cands[depth].pop() else {
            cands.pop();
            if depth == 0 {
                break;
            }
            depth -= 1;
            continue;
        };
        explored += 1;
        if (explored > limits.node_limit || (explored.is_multiple_of(1024) && start.elapsed() > limits.time_limit))
            && best.is_some() {
                complete = false;
                break;
            }
        s.value[p] = Some(r);
        s.refresh(net);
        let bound = total(s);
        if best.as_ref().is_some_and(|b| bound >= b.0) {
            continue;
        }
        if depth + 1 == pins.len() {
            best = Some((bound, pins.iter().map(|&q| s.value[q].unwrap()).collect()));
            if bound == root_bound {
                break;
            }
            continue;
        }
        depth += 1;
        let next = order_values(s, pins[depth]);
        cands.push(next);
    }
    for &p in pins {
        s.value[p] = None;
    }
    let (_, vals) = best.expect("component has a feasible assignment");
    for (&p, v) in pins.iter().zip(vals) {
        s.value[p] = Some(v);
    }
    for k in comp_nets {
        s.refresh(k);
    }
    complete
}

fn materialize(
    model: &BalanceModel,
    pin_value: impl Fn(usize) -> i64,
    net_chain: impl Fn(usize) -> Vec<i64>,
    optimal: bool,
) -> BalancedDesign {
    let n = model.stages.n as i64;
    let mut net = model.net.clone();
    let mut sigma = model.stages.sigma.clone();
    sigma.resize(net.len(), None);
    for &pi in net.inputs() {
        sigma[pi] = Some(0);
    }
    let chains: Vec<Vec<(i64, Signal)>> = model
        .nets
        .iter()
        .enumerate()
        .map(|(k, req)| {
            let mut elems = vec![(req.stage, Signal { node: req.node, port: req.port, complemented: false })];
            for st in net_chain(k) {
                let prev = elems.last().unwrap().1;
                let id = net
                    .push_node(Node { kind: GateKind::Dff, fanins: vec![prev], t1_outputs: Default::default(), name: None })
                    .expect("valid DFF");
                sigma.resize(net.len(), None);
                sigma[id] = Some(st as u32);
                elems.push((st, Signal::new(id)));
            }
            elems
        })
        .collect();
    let mut index = std::collections::HashMap::new();
    for (k, req) in model.nets.iter().enumerate() {
        index.insert((req.node, req.port), k);
    }
    let mut pin_of = std::collections::HashMap::new();
    for (p, pin) in model.pins.iter().enumerate() {
        pin_of.insert((pin.t1, pin.slot), p);
    }
    let original = model.net.len();
    for id in 0..original {
        if !net.is_live(id) {
            continue;
        }
        let kind = net.node(id).kind;
        if matches!(kind, GateKind::Pi | GateKind::Po) {
            continue;
        }
        let sv = sigma[id].unwrap() as i64;
        let fanins = net.node(id).fanins.clone();
        let mut new_fanins = Vec::with_capacity(fanins.len());
        for (slot, f) in fanins.into_iter().enumerate() {
            let elems = &chains[index[&f.source()]];
            let pick = if kind == GateKind::T1 {
                let r = pin_value(pin_of[&(id, slot)]);
                elems.iter().find(|e| e.0 == r).expect("release element")
            } else {
                elems.iter().rev().find(|e| sv - n <= e.0 && e.0 < sv).expect("window element")
            };
            new_fanins.push(pick.1.with_complement(f.complemented));
        }
        net.node_mut(id).fanins = new_fanins;
    }
    let stages = StageAssignment { n: model.stages.n, sigma };
    let metrics = metrics_of(&net, &stages, &CostTable::default());
    BalancedDesign { netlist: net, n: model.stages.n, stages, metrics, optimal }
}

pub fn metrics_of(net: &Netlist, stages: &StageAssignment, costs: &CostTable) -> Metrics {
    let max = stages.max_stage();
    Metrics {
        dff_count: net.count(GateKind::Dff),
        jj_area: net.area(costs).unwrap_or(0),
        depth_cycles: max.div_ceil(stages.n),
    }
}

/// Reference insertion without sharing: every edge gets its own chain of
/// `floor((d - 1) / n)` DFFs. T1 pins, taken in decreasing source stage, use
/// the latest free release stage in their window.
pub fn greedy_baseline(model: &BalanceModel) -> BalancedDesign {
    let n = model.stages.n as i64;
    let mut value = vec![0i64; model.pins.len()];
    for g in &model.groups {
        let mut order = g.clone();
        order.sort_by_key(|&p| (std::cmp::Reverse(model.nets[model.pins[p].net].stage), model.pins[p].slot));
        let mut used: Vec<i64> = Vec::new();
        for p in order {
            let pin = model.pins[p];
            let r = (pin.lo..=pin.hi).rev().find(|r| !used.contains(r)).expect("free slot");
            used.push(r);
            value[p] = r;
        }
    }

    let mut net = model.net.clone();
    let mut sigma = model.stages.sigma.clone();
    for &pi in net.inputs() {
        sigma[pi] = Some(0);
    }
    let mut pin_of = std::collections::HashMap::new();
    for (p, pin) in model.pins.iter().enumerate() {
        pin_of.insert((pin.t1, pin.slot), p);
    }
    let original = net.len();
    for id in 0..original {
        if !net.is_live(id) || matches!(net.node(id).kind, GateKind::Pi | GateKind::Po) {
            continue;
        }
        let kind = net.node(id).kind;
        let sv = sigma[id].unwrap() as i64;
        let fanins = net.node(id).fanins.clone();
        let mut new_fanins = Vec::new();
        for (slot, f) in fanins.into_iter().enumerate() {
            let su = sigma[f.node].unwrap() as i64;
            let stages: Vec<i64> = if kind == GateKind::T1 {
                let r = value[pin_of[&(id, slot)]];
                let k = (r - su + n - 1) / n;
                (0..k).rev().map(|j| r - j * n).collect()
            } else {
                let k = (sv - su - 1) / n;
                (1..=k).map(|j| su + j * n).collect()
            };
            let mut prev = Signal { complemented: false, ..f };
            for st in stages {
                let id = net
                    .push_node(Node { kind: GateKind::Dff, fanins: vec![prev], t1_outputs: Default::default(), name: None })
                    .expect("valid DFF");
                sigma.resize(net.len(), None);
                sigma[id] = Some(st as u32);
                prev = Signal::new(id);
            }
            new_fanins.push(prev.with_complement(f.complemented));
        }
        net.node_mut(id).fanins = new_fanins;
    }
    sigma.resize(net.len(), None);
    let stages = StageAssignment { n: model.stages.n, sigma };
    let metrics = metrics_of(&net, &stages, &CostTable::default());
    BalancedDesign { netlist: net, n: model.stages.n, stages, metrics, optimal: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::T1Role;
    use rand::{Rng, SeedableRng};

    fn stages_for(net: &Netlist, n: u32, pairs: &[(NodeId, u32)]) -> StageAssignment {
        let mut sigma = vec![None; net.len()];
        for &pi in net.inputs() {
            sigma[pi] = Some(0);
        }
        for &(id, s) in pairs {
            sigma[id] = Some(s);
        }
        StageAssignment { n, sigma }
    }

    fn solve(net: &Netlist, st: &StageAssignment) -> BalancedDesign {
        solve_balancing(&build_csp(net, st).unwrap(), &SolveLimits::default()).unwrap()
    }

    /// Smallest set of stages in (src, src + span] meeting the requirements, by enumeration.
    fn brute_chain(src: i64, n: i64, points: &[i64], windows: &[(i64, i64)], span: i64) -> usize {
        let mut best = usize::MAX;
        for mask in 0u32..(1 << span) {
            let elems: Vec<i64> = (0..span).filter(|i| mask >> i & 1 == 1).map(|i| src + 1 + i).collect();
            let all: Vec<i64> = std::iter::once(src).chain(elems.iter().copied()).collect();
            let gaps = all.windows(2).all(|w| w[1] - w[0] <= n);
            let pts = points.iter().all(|r| all.contains(r));
            let wins = windows.iter().all(|&(a, b)| all.iter().any(|&e| a <= e && e <= b));
            if gaps && pts && wins {
                best = best.min(elems.len());
            }
        }
        best
    }

    #[test]
    fn greedy_chain_is_minimal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..400 {
            let n = rng.gen_range(1..=4i64);
            let src = rng.gen_range(0..3i64);
            let span = 3 * n + 1;
            let mut windows = Vec::new();
            let mut points = Vec::new();
            for _ in 0..rng.gen_range(0..=4) {
                let v = src + rng.gen_range(1..=span);
                if rng.gen_bool(0.3) {
                    points.push(rng.gen_range((v - n).max(src)..v));
                } else {
                    windows.push((v - n, v - 1));
                }
            }
            let got = chain(src, n, &points, &windows);
            assert_eq!(got.len(), brute_chain(src, n, &points, &windows, span), "{src} {n} {points:?} {windows:?}");
            for r in &points {
                assert!(*r == src || got.contains(r));
            }
        }
    }

    #[test]
    fn single_edge_chain() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let g = net.not(a);
        net.add_po(g, "o").unwrap();
        let st = stages_for(&net, 4, &[(g.node, 9)]);
        let d = solve(&net, &st);
        assert_eq!(d.metrics.dff_count, 2);
        let model = build_csp(&net, &st).unwrap();
        assert_eq!(greedy_baseline(&model).metrics.dff_count, 2);
        assert_eq!(d.metrics.depth_cycles, 3);

        let st = stages_for(&net, 4, &[(g.node, 5)]);
        assert_eq!(solve(&net, &st).metrics.dff_count, 1);
    }

    #[test]
    fn shared_fanout_beats_baseline() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let x = net.not(a);
        let y = net.not(b);
        let g1 = net.and2(x, y);
        let g2 = net.or2(x, y);
        net.add_po(g1, "p").unwrap();
        net.add_po(g2, "q").unwrap();
        // x fans out to two sinks five stages later
        let st = stages_for(&net, 4, &[(x.node, 1), (y.node, 5), (g1.node, 6), (g2.node, 6)]);
        let d = solve(&net, &st);
        assert_eq!(d.metrics.dff_count, 2);
        let base = greedy_baseline(&build_csp(&net, &st).unwrap());
        assert_eq!(base.metrics.dff_count, 3);
        assert!(d.optimal);
    }

    #[test]
    fn fanout_within_window_needs_nothing() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let sinks: Vec<Signal> = (0..4).map(|_| net.not(a)).collect();
        for (i, s) in sinks.iter().enumerate() {
            net.add_po(*s, format!("o{i}")).unwrap();
        }
        let pairs: Vec<(NodeId, u32)> = sinks.iter().enumerate().map(|(i, s)| (s.node, 1 + i as u32)).collect();
        assert_eq!(solve(&net, &stages_for(&net, 4, &pairs)).metrics.dff_count, 0);
    }

    #[test]
    fn t1_over_primary_inputs() {
        let mut net = Netlist::new();
        let ins = [net.add_pi("a"), net.add_pi("b"), net.add_pi("c")];
        let t1 = net.add_t1(ins, [T1Role::Sum, T1Role::Carry].into()).unwrap();
        net.add_po(Signal::t1(t1, T1Role::Sum), "s").unwrap();
        net.add_po(Signal::t1(t1, T1Role::Carry), "c").unwrap();
        let st = stages_for(&net, 4, &[(t1, 3)]);
        let d = solve(&net, &st);
        assert_eq!(d.metrics.dff_count, 2);
        let mut rel: Vec<u32> =
            d.netlist.node(t1).fanins.iter().map(|s| d.stages.stage(s.node).unwrap()).collect();
        rel.sort_unstable();
        assert_eq!(rel, vec![0, 1, 2]);
        assert!(greedy_baseline(&build_csp(&net, &st).unwrap()).metrics.dff_count >= 2);
    }

    #[test]
    fn t1_with_same_stage_producers() {
        let mut net = Netlist::new();
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let c = net.add_pi("c");
        let x = net.not(a);
        let y = net.not(b);
        let z = net.not(c);
        let t1 = net.add_t1([x, y, z], [T1Role::Carry].into()).unwrap();
        net.add_po(Signal::t1(t1, T1Role::Carry), "c").unwrap();
        let st = stages_for(&net, 4, &[(x.node, 1), (y.node, 1), (z.node, 1), (t1, 4)]);
        // releases must be 1, 2 and 3, so two inputs are delayed
        assert_eq!(solve(&net, &st).metrics.dff_count, 2);
        let st = stages_for(&net, 4, &[(x.node, 1), (y.node, 1), (z.node, 2), (t1, 4)]);
        assert_eq!(solve(&net, &st).metrics.dff_count, 1);
    }

    #[test]
    fn single_phase_path_balancing() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let mut net = Netlist::new();
            let mut pool: Vec<Signal> = (0..3).map(|i| net.add_pi(format!("i{i}"))).collect();
            for _ in 0..8 {
                let a = pool[rng.gen_range(0..pool.len())];
                let b = pool[rng.gen_range(0..pool.len())];
                let g = net.and2(a, b);
                pool.push(g);
            }
            net.add_po(*pool.last().unwrap(), "o").unwrap();
            let levels = net.levels().unwrap();
            let pairs: Vec<(NodeId, u32)> = (0..net.len())
                .filter(|&id| net.node(id).kind == GateKind::And2)
                .map(|id| (id, levels[id] as u32 + rng.gen_range(0..2)))
                .collect();
            let mut st = stages_for(&net, 1, &pairs);
            // repair ordering after the random slack
            for id in net.topo_order().unwrap() {
                if net.node(id).kind == GateKind::And2 {
                    let lo = net.node(id).fanins.iter().map(|f| st.stage(f.node).unwrap() + 1).max().unwrap();
                    st.sigma[id] = Some(st.stage(id).unwrap().max(lo));
                }
            }
            let per_edge: i64 = (0..net.len())
                .filter(|&id| net.node(id).kind == GateKind::And2)
                .flat_map(|id| net.node(id).fanins.iter().map(move |f| (f.node, id)))
                .map(|(u, v)| st.stage(v).unwrap() as i64 - st.stage(u).unwrap() as i64 - 1)
                .sum();
            let model = build_csp(&net, &st).unwrap();
            assert_eq!(greedy_baseline(&model).metrics.dff_count as i64, per_edge);
            let opt = solve_balancing(&model, &SolveLimits::default()).unwrap();
            assert!(opt.metrics.dff_count as i64 <= per_edge);
            let shared: i64 = model.nets.iter().map(|r| r.windows.iter().map(|w| w.1 - r.stage).max().unwrap_or(0)).sum();
            assert_eq!(opt.metrics.dff_count as i64, shared);
        }
    }
}
