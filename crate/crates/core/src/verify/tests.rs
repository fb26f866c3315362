use super::*;
use crate::balancing::{build_csp, solve_balancing, BalancedDesign};
use crate::cuts::{enumerate_cuts, tests::random_net, DEFAULT_CUT_LIMIT};
use crate::netlist::{CostTable, GateKind, Netlist, Signal, T1Role};
use crate::staging::{build_ilp, solve_stages, SolveLimits, StageAssignment};
use crate::t1map::{group_candidates, select_and_rewrite};
use proptest::prelude::*;

fn full_adder() -> Netlist {
    let mut net = Netlist::new();
    let a = net.add_pi("a");
    let b = net.add_pi("b");
    let c = net.add_pi("c");
    let x = net.xor2(a, b);
    let s = net.xor2(x, c);
    let g = net.and2(a, b);
    let p = net.and2(x, c);
    let co = net.or2(g, p);
    net.add_po(s, "s").unwrap();
    net.add_po(co, "co").unwrap();
    net
}

fn pipeline(reference: &Netlist, n: u32, t1: bool) -> BalancedDesign {
    let costs = CostTable::default();
    let mut net = reference.clone();
    if t1 {
        let cuts = enumerate_cuts(&net, 3, DEFAULT_CUT_LIMIT).unwrap();
        let cands = group_candidates(&net, &cuts, &costs).unwrap();
        net = select_and_rewrite(&net, &cands, &costs).unwrap().net;
    }
    net.materialize_inversions();
    let (net, _) = net.compact().unwrap();
    let limits = SolveLimits::default();
    let sol = solve_stages(&build_ilp(&net, n).unwrap(), &limits).unwrap();
    solve_balancing(&build_csp(&net, &sol.assignment).unwrap(), &limits).unwrap()
}

fn bits(v: &[u8]) -> Vec<bool> {
    v.iter().map(|&b| b == 1).collect()
}

#[test]
fn full_adder_design_adds() {
    let reference = full_adder();
    let d = pipeline(&reference, 4, true);
    assert_eq!(d.netlist.count(GateKind::T1), 1);
    let r = simulate(&d, &[bits(&[1, 0, 1]), bits(&[0, 0, 0])]).unwrap();
    assert_eq!(r.outputs, vec![bits(&[0, 1]), bits(&[0, 0])]);
    assert!(r.hazards.is_empty());
    assert!(validate_schedule(&d, 4).is_clean());
    let eq = check_equivalence(&reference, &d, EquivMode::Exhaustive).unwrap();
    assert!(eq.equal && eq.exhaustive && eq.hazards == 0);
    assert_eq!(eq.vectors, 8);
}

#[test]
fn net_against_itself() {
    let reference = full_adder();
    let d = pipeline(&reference, 1, false);
    assert!(check_equivalence(&reference, &d, EquivMode::Exhaustive).unwrap().equal);
}

#[test]
fn swapped_outputs_give_counterexample() {
    let reference = full_adder();
    let mut d = pipeline(&reference, 4, true);
    let outs = d.netlist.outputs().to_vec();
    let (s, c) = (d.netlist.node(outs[0]).fanins[0], d.netlist.node(outs[1]).fanins[0]);
    d.netlist.node_mut(outs[0]).fanins[0] = c;
    d.netlist.node_mut(outs[1]).fanins[0] = s;
    let eq = check_equivalence(&reference, &d, EquivMode::Exhaustive).unwrap();
    assert!(!eq.equal);
    let cex = eq.counterexample.unwrap();
    let ins: Vec<bool> = cex.inputs.iter().map(|p| p.1).collect();
    assert_eq!(ins, bits(&[1, 0, 0]));
    assert_ne!(cex.expected, cex.actual);
}

#[test]
fn interface_mismatch() {
    let reference = full_adder();
    let mut other = full_adder();
    other.add_pi("extra");
    let d = pipeline(&other, 4, false);
    assert!(matches!(check_equivalence(&reference, &d, EquivMode::Exhaustive), Err(VerifyError::Interface(_))));
}

/// T1 over three PIs, one of them delayed to stage 2, cell at stage 3.
fn t1_two_equal_releases() -> (Netlist, BalancedDesign) {
    let mut net = Netlist::new();
    let a = net.add_pi("a");
    let b = net.add_pi("b");
    let c = net.add_pi("c");
    let dff = net.add_gate(GateKind::Dff, vec![c]).unwrap();
    let t1 = net.add_t1([a, b, Signal::new(dff)], [T1Role::Sum, T1Role::Carry].into()).unwrap();
    net.add_po(Signal::t1(t1, T1Role::Sum), "s").unwrap();
    net.add_po(Signal::t1(t1, T1Role::Carry), "co").unwrap();
    let mut sigma = vec![None; net.len()];
    for id in [a.node, b.node, c.node] {
        sigma[id] = Some(0);
    }
    sigma[dff] = Some(2);
    sigma[t1] = Some(3);
    let stages = StageAssignment { n: 4, sigma };
    let metrics = crate::balancing::metrics_of(&net, &stages, &CostTable::default());
    let d = BalancedDesign { netlist: net.clone(), n: 4, stages, metrics, optimal: false };
    (full_adder(), d)
}

#[test]
fn equal_releases_are_flagged() {
    let (reference, d) = t1_two_equal_releases();
    let report = validate_schedule(&d, 4);
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.count(ViolationKind::T1Separation), 1);
    let r = simulate(&d, &[bits(&[1, 1, 0]), bits(&[1, 0, 0])]).unwrap();
    assert_eq!(r.hazards.len(), 1);
    assert_eq!(r.hazards[0].vector, 0);
    assert_eq!(r.hazards[0].stage, 0);
    let eq = check_equivalence(&reference, &d, EquivMode::Exhaustive).unwrap();
    assert!(eq.hazards > 0 || !eq.equal);
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("t1-separation"));
}

#[test]
fn long_gap_is_flagged_and_breaks_function() {
    let mut net = Netlist::new();
    let a = net.add_pi("a");
    let b = net.add_pi("b");
    let x = net.not(a);
    let g = net.and2(x, b);
    net.add_po(g, "o").unwrap();
    let mut sigma = vec![None; net.len()];
    sigma[a.node] = Some(0);
    sigma[b.node] = Some(0);
    sigma[x.node] = Some(1);
    sigma[g.node] = Some(5);
    let stages = StageAssignment { n: 4, sigma };
    let metrics = crate::balancing::metrics_of(&net, &stages, &CostTable::default());
    let d = BalancedDesign { netlist: net.clone(), n: 4, stages, metrics, optimal: false };
    let report = validate_schedule(&d, 4);
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].kind, ViolationKind::Gap);
    assert!(!check_equivalence(&net, &d, EquivMode::Exhaustive).unwrap().equal);
}

#[test]
fn all_zero_inputs_give_zero_outputs() {
    let reference = full_adder();
    for (n, t1) in [(1, false), (4, false), (4, true)] {
        let d = pipeline(&reference, n, t1);
        let r = simulate(&d, &vec![vec![false; 3]; 5]).unwrap();
        assert!(r.outputs.iter().flatten().all(|&b| !b));
    }
}

#[test]
fn stream_matches_single_vectors() {
    let reference = random_net(17, 6, 30);
    let d = pipeline(&reference, 4, true);
    let vectors: Vec<Vec<bool>> = (0..200u32).map(|i| (0..6).map(|b| i.wrapping_mul(2654435761u32) >> (b + 7) & 1 == 1).collect()).collect();
    let stream = simulate(&d, &vectors).unwrap();
    for (v, out) in vectors.iter().zip(&stream.outputs) {
        let single = simulate(&d, std::slice::from_ref(v)).unwrap();
        assert_eq!(&single.outputs[0], out);
    }
}

#[test]
fn random_mode_is_seeded() {
    let reference = random_net(4, 24, 60);
    let d = pipeline(&reference, 4, true);
    let mode = EquivMode::auto(24, 5000, 7);
    assert_eq!(mode, EquivMode::Random { count: 5000, seed: 7 });
    let r = check_equivalence(&reference, &d, mode).unwrap();
    assert!(r.equal && !r.exhaustive);
    assert_eq!(r.vectors, 5000);
}

/// Chain of full adders with random gates mixed in, so T1 rewrites happen.
fn adderish(seed: u64) -> Netlist {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut net = random_net(seed, 5, rng.gen_range(3..12));
    let mut pool: Vec<Signal> = net.inputs().iter().map(|&i| Signal::new(i)).collect();
    for _ in 0..rng.gen_range(1..4) {
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| pool[rng.gen_range(0..pool.len())].with_complement(rng.gen_bool(0.2));
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let x = net.xor2(a, b);
        let s = net.xor2(x, c);
        let g = net.and2(a, b);
        let p = net.and2(x, c);
        let co = net.or2(g, p);
        pool.push(s);
        pool.push(co);
    }
    let k = pool.len();
    for (i, s) in pool[k - 2..].iter().enumerate() {
        net.add_po(*s, format!("fa{i}")).unwrap();
    }
    net
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pipeline_output_is_legal_and_equivalent(seed in 0u64..10_000, n in prop::sample::select(vec![1u32, 3, 4, 5]), t1 in any::<bool>()) {
        let reference = adderish(seed);
        let t1 = t1 && n >= 3;
        let d = pipeline(&reference, n, t1);
        let report = validate_schedule(&d, n);
        prop_assert!(report.is_clean(), "{:?}", report);
        let eq = check_equivalence(&reference, &d, EquivMode::Exhaustive).unwrap();
        prop_assert!(eq.equal, "{:?}", eq.counterexample);
        prop_assert_eq!(eq.hazards, 0);
    }
}
