//! Branch-and-bound over stage variables.
//!
//! Variables are fixed in topological order with ascending values, so the
//! first optimum found is the lexicographically smallest one. The bound is
//! the exact cost of everything already decided plus, for every edge whose
//! consumer is still free, the DFFs it needs even if the consumer takes its
//! earliest stage. The search starts from an ASAP schedule improved by
//! single-variable moves.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use log::debug;

use super::model::{IlpModel, Source};
use super::{t1_pair_cost, StageAssignment, StagingError};

#[derive(Clone, Debug)]
pub struct SolveLimits {
    pub time_limit: Duration,
    /// Search nodes before giving up on optimality; keeps runs reproducible.
    pub node_limit: u64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { time_limit: Duration::from_secs(30), node_limit: 2_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct StageSolution {
    pub assignment: StageAssignment,
    pub objective: i64,
    /// Whether the search finished, proving the objective minimal.
    pub optimal: bool,
    pub nodes_explored: u64,
}

struct Graph {
    consumers: Vec<Vec<usize>>,
    /// Per variable: indices into `model.edges` leaving it.
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    /// T1 groups (by index into `model.t1s`) each variable feeds.
    t1_consumers: Vec<Vec<usize>>,
    t1_of_var: Vec<Option<usize>>,
}

impl Graph {
    fn new(model: &IlpModel) -> Graph {
        let nv = model.num_vars();
        let mut g = Graph {
            consumers: vec![Vec::new(); nv],
            out_edges: vec![Vec::new(); nv],
            in_edges: vec![Vec::new(); nv],
            t1_consumers: vec![Vec::new(); nv],
            t1_of_var: vec![None; nv],
        };
        for (i, e) in model.edges.iter().enumerate() {
            g.in_edges[e.to].push(i);
            if let Source::Var(u) = e.from {
                g.out_edges[u].push(i);
                if !g.consumers[u].contains(&e.to) {
                    g.consumers[u].push(e.to);
                }
            }
        }
        for (t, grp) in model.t1s.iter().enumerate() {
            g.t1_of_var[grp.var] = Some(t);
            for s in grp.inputs {
                if let Source::Var(u) = s {
                    if !g.t1_consumers[u].contains(&t) {
                        g.t1_consumers[u].push(t);
                    }
                }
            }
        }
        g
    }
}

fn edge_cost(d: i64, n: i64) -> i64 {
    if d < 1 {
        i64::MAX / 4
    } else {
        (d - 1) / n
    }
}

fn t1_cost(model: &IlpModel, t: usize, sigma: &[i64]) -> i64 {
    let g = &model.t1s[t];
    let ins = g.inputs.map(|s| model.source_stage(s, sigma));
    t1_pair_cost(ins, sigma[g.var], model.n) as i64
}

/// Cost terms touching variable `v`.
fn local_cost(model: &IlpModel, graph: &Graph, v: usize, sigma: &[i64]) -> i64 {
    let n = model.n as i64;
    let mut c = 0;
    for &e in graph.in_edges[v].iter().chain(&graph.out_edges[v]) {
        let edge = model.edges[e];
        c += edge_cost(sigma[edge.to] - model.source_stage(edge.from, sigma), n);
    }
    if let Some(t) = graph.t1_of_var[v] {
        c += t1_cost(model, t, sigma);
    }
    for &t in &graph.t1_consumers[v] {
        c += t1_cost(model, t, sigma);
    }
    c
}

fn consumers_ok(model: &IlpModel, graph: &Graph, v: usize, sigma: &[i64]) -> bool {
    graph.consumers[v].iter().all(|&w| sigma[w] >= model.lower_bound(w, |s| model.source_stage(s, sigma)))
}

/// Moves single variables to their locally cheapest legal stage until no move helps.
fn improve(model: &IlpModel, graph: &Graph, sigma: &mut [i64], ub: &[i64]) {
    let nv = model.num_vars();
    let span = 64 * model.n as i64;
    for _ in 0..100 {
        let mut improved = false;
        let order: Vec<usize> = (0..nv).chain((0..nv).rev()).collect();
        for v in order {
            let lo = model.lower_bound(v, |s| model.source_stage(s, sigma));
            let hi = graph.consumers[v]
                .iter()
                .filter(|&&w| !model.is_t1[w])
                .map(|&w| sigma[w] - 1)
                .fold(ub[v], i64::min)
                .min(lo + span);
            let cur = sigma[v];
            let mut best = (local_cost(model, graph, v, sigma), cur);
            for x in lo..=hi {
                if x == cur {
                    continue;
                }
                sigma[v] = x;
                if !consumers_ok(model, graph, v, sigma) {
                    continue;
                }
                let c = local_cost(model, graph, v, sigma);
                if c < best.0 {
                    best = (c, x);
                }
            }
            sigma[v] = best.1;
            improved |= best.1 != cur;
        }
        if !improved {
            break;
        }
    }
}

pub fn solve_stages(model: &IlpModel, limits: &SolveLimits) -> Result<StageSolution, StagingError> {
    let nv = model.num_vars();
    let n = model.n as i64;
    let graph = Graph::new(model);
    let asap = model.asap();
    let tails = model.tails();
    let ub: Vec<i64> = (0..nv).map(|v| model.sigma_max as i64 - tails[v]).collect();
    for v in 0..nv {
        if asap[v] > ub[v] {
            return Err(StagingError::Infeasible(model.nodes[v]));
        }
    }

    let mut best = asap.clone();
    improve(model, &graph, &mut best, &ub);
    let mut best_cost = model.objective(&best);
    debug!("stage search: {nv} variables, initial objective {best_cost}");

    // exact cost of in-edges and own T1 term, fixed when a variable is set
    let mut exact = vec![0i64; nv];
    // frontier bound added by a variable's out-edges
    let mut added = vec![0i64; nv];
    let mut edge_lb = vec![0i64; model.edges.len()];
    let mut frontier: i64 = 0;
    for (i, e) in model.edges.iter().enumerate() {
        if let Source::Pinned(_) = e.from {
            edge_lb[i] = (asap[e.to] - 1).max(0) / n;
            frontier += edge_lb[i];
        }
    }
    let mut exact_total: i64 = 0;
    let mut sigma = vec![0i64; nv];
    let mut hi = vec![0i64; nv];
    // ordering of sigma[..=j] against best[..=j]
    let mut cmp = vec![Ordering::Equal; nv];
    let mut set = vec![false; nv];

    let start = Instant::now();
    let mut explored: u64 = 0;
    let mut complete = true;
    let mut j: isize = 0;
    if nv == 0 {
        return Ok(StageSolution { assignment: model.to_assignment(&[]), objective: 0, optimal: true, nodes_explored: 0 });
    }
    sigma[0] = model.lower_bound(0, |s| model.source_stage(s, &sigma)) - 1;
    hi[0] = ub[0];

    while j >= 0 {
        let v = j as usize;
        if set[v] {
            // undo the previous value
            exact_total -= exact[v];
            frontier -= added[v];
            for &e in &graph.in_edges[v] {
                frontier += edge_lb[e];
            }
            for &e in &graph.out_edges[v] {
                edge_lb[e] = 0;
            }
            set[v] = false;
        }
        sigma[v] += 1;
        if sigma[v] > hi[v] {
            j -= 1;
            continue;
        }
        explored += 1;
        if explored > limits.node_limit || (explored.is_multiple_of(4096) && start.elapsed() > limits.time_limit) {
            complete = false;
            break;
        }

        let x = sigma[v];
        let mut ex = 0;
        for &e in &graph.in_edges[v] {
            let edge = model.edges[e];
            ex += edge_cost(x - model.source_stage(edge.from, &sigma), n);
            frontier -= edge_lb[e];
        }
        if let Some(t) = graph.t1_of_var[v] {
            ex += t1_cost(model, t, &sigma);
        }
        let mut add = 0;
        for &e in &graph.out_edges[v] {
            let to = model.edges[e].to;
            edge_lb[e] = (asap[to] - x - 1).max(0) / n;
            add += edge_lb[e];
        }
        exact[v] = ex;
        added[v] = add;
        exact_total += ex;
        frontier += add;
        set[v] = true;

        cmp[v] = if v > 0 && cmp[v - 1] != Ordering::Equal { cmp[v - 1] } else { x.cmp(&best[v]) };
        let bound = exact_total + frontier;
        if bound > best_cost || (bound == best_cost && cmp[v] == Ordering::Greater) {
            continue;
        }
        if v + 1 == nv {
            if exact_total == best_cost && cmp[v] != Ordering::Less {
                continue;
            }
            best.copy_from_slice(&sigma);
            best_cost = exact_total;
            for k in 0..nv {
                cmp[k] = Ordering::Equal;
            }
            continue;
        }
        let w = v + 1;
        let lo = model.lower_bound(w, |s| model.source_stage(s, &sigma)).max(asap[w]);
        sigma[w] = lo - 1;
        hi[w] = ub[w];
        j += 1;
    }

    debug_assert!(model.is_feasible(&best));
    debug!("stage search: objective {best_cost}, {explored} nodes, optimal {complete}");
    Ok(StageSolution {
        assignment: model.to_assignment(&best),
        objective: best_cost,
        optimal: complete,
        nodes_explored: explored,
    })
}
