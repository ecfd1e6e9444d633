use algorithms::{build, Algorithm, MatchingDetect, MatchingPhase, MisPhase, ProblemSpec};
use engine::{
    random_fault_schedule, ActionKind, AdversaryAction, CorruptMask, EngineError, FaultKind, InvariantMonitor, LocalityMonitor, Network,
    Protocol, TraceRecord, TraceWriter,
};
use graph_core::{generate, Configuration, Graph, Label, NodeId};
use lcl_core::{is_legal, is_strong, LclSpec, PotentialSpec, IN, OUT};
use pps::{PpsState, RngStream, Step};
use transformer::{EdgeTransformer, NodeMsg, NodeTransformer, PhaseField};

type Mis = NodeTransformer<MisPhase>;
type Mm = EdgeTransformer<MatchingPhase, MatchingDetect>;

fn mis() -> Mis {
    match build(&ProblemSpec::new("mis", 2)).unwrap().algorithm {
        Algorithm::Mis(t) => t,
        _ => unreachable!(),
    }
}

fn mm() -> Mm {
    match build(&ProblemSpec::new("mm", 2)).unwrap().algorithm {
        Algorithm::Matching(t) => t,
        _ => unreachable!(),
    }
}

fn settle<P: Protocol>(net: &mut Network<P>) -> Configuration {
    let w = net.protocol().params().confirm_window() as u64;
    net.run_until_stable(100_000, w, |_| {}).unwrap().config
}

#[test]
fn mis_from_all_undecided_on_a_short_cycle() {
    let g = generate::cycle(8, 2).unwrap();
    for seed in 0..100 {
        let mut net = Network::new(mis(), g.clone(), seed);
        let c = settle(&mut net);
        assert!(is_legal(&LclSpec::mis(), &g, &c), "seed {seed}");
        assert!(net.write_violations().is_empty());
    }
}

#[test]
fn legal_configuration_is_left_alone() {
    let g = generate::cycle(30, 2).unwrap();
    let mut net = Network::new(mis(), g, 4);
    let c = settle(&mut net);
    for _ in 0..100 {
        net.run_round().unwrap();
        assert_eq!(net.host_config(), c);
    }
    let again = net.run_until_stable(100, 8, |_| {}).unwrap();
    assert_eq!(again.round, net.round() - 8);
}

#[test]
fn legal_start_stabilizes_at_once_and_zero_budget_times_out() {
    let g = generate::cycle(12, 2).unwrap();
    let mut net = Network::new(mis(), g.clone(), 2);
    let c = settle(&mut net);
    let start = net.round();
    let s = net.run_until_stable(1_000, 8, |_| {}).unwrap();
    assert_eq!(s.round, start);
    assert_eq!(s.config, c);

    let mut fresh = Network::new(mis(), g, 2);
    assert_eq!(fresh.run_until_stable(0, 8, |_| {}), Err(EngineError::Timeout { max_rounds: 0 }));
}

#[test]
fn hold_clears_wait() {
    let mut net = Network::new(mis(), generate::path(3, 2).unwrap(), 1);
    net.state_mut(1).wait = true;
    net.run_round().unwrap();
    assert!(!net.state(1).wait);
}

#[test]
fn working_steps_advance_deterministically() {
    let mut net = Network::new(mm(), generate::cycle(6, 2).unwrap(), 1);
    for v in 0..6 {
        net.state_mut(v).pps = PpsState::new(Step::At(2), 4);
    }
    net.run_round().unwrap();
    for v in 0..6 {
        assert_eq!(net.state(v).pps.step(), Step::At(3));
    }
}

/// Working-stage payloads ignore the decided neighbors' outputs.
#[test]
fn working_payload_ignores_decided_neighbors() {
    let g = generate::star(2, 2).unwrap();
    let run = |decided: Label| {
        let mut net = Network::new(mis(), g.clone(), 9);
        net.state_mut(0).pps = PpsState::new(Step::At(1), 3);
        let engaged = NodeMsg { detect: None, phase: PhaseField::Announce(None), pps: Step::At(0) };
        let settled = NodeMsg { detect: Some(decided), phase: PhaseField::Announce(Some(decided)), pps: Step::At(0) };
        let (p1, p2) = (g.port_to(0, 1).unwrap(), g.port_to(0, 2).unwrap());
        net.inbox_mut(0)[p1] = engaged;
        net.inbox_mut(0)[p2] = settled;
        net.run_round().unwrap();
        net.inbox(1)[0].phase.clone()
    };
    let a = run(IN);
    assert!(matches!(a, PhaseField::Work(_)));
    assert_eq!(a, run(OUT));
}

#[test]
fn runs_are_deterministic() {
    let trace = |seed: u64| {
        let mut rng = RngStream::from_seed(seed);
        let g = generate::random_bounded(30, 0.15, 4, &mut rng).unwrap();
        let mut net = Network::new(mm(), g.clone(), seed);
        net.randomize_all();
        let faults = random_fault_schedule(&g, 5, 2, &FaultKind::ALL, 100, seed).unwrap();
        net.schedule(faults).unwrap();
        let mut out = Vec::new();
        for _ in 0..300 {
            out.push(net.host_config());
            net.run_round().unwrap();
        }
        out
    };
    for seed in 0..5 {
        assert_eq!(trace(seed), trace(seed));
    }
    assert_ne!(trace(1), trace(2));
}

#[test]
fn schedule_shapes() {
    let g = generate::cycle(40, 2).unwrap();
    let one = random_fault_schedule(&g, 1, 1, &[FaultKind::CorruptOutput], 5, 1).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].round, 5);

    let many = random_fault_schedule(&g, 8, 4, &FaultKind::ALL, 10, 3).unwrap();
    let rounds: std::collections::BTreeSet<u64> = many.iter().map(|a| a.round).collect();
    assert_eq!(rounds, (10..14).collect());
    let mut net = Network::new(mis(), g.clone(), 3);
    settle(&mut net);
    let start = net.round();
    let shifted: Vec<AdversaryAction> = many.iter().map(|a| AdversaryAction { round: a.round + start, kind: a.kind.clone() }).collect();
    net.schedule(shifted).unwrap();
    while net.has_pending_actions() {
        net.run_round().unwrap();
    }
    assert_eq!(net.manipulated().len(), 8);
    assert_eq!(net.fault_rounds(), Some((start + 10, start + 13)));

    assert_eq!(random_fault_schedule(&g, 41, 1, &[], 0, 0), Err(EngineError::KTooLarge { k: 41, n: 40 }));
    assert_eq!(many, random_fault_schedule(&g, 8, 4, &FaultKind::ALL, 10, 3).unwrap());
}

#[test]
fn empty_batch_changes_nothing() {
    let mut net = Network::new(mis(), generate::cycle(10, 2).unwrap(), 3);
    let c = settle(&mut net);
    net.schedule(Vec::new()).unwrap();
    assert!(net.manipulated().is_empty());
    assert_eq!(net.host_config(), c);
}

#[test]
fn degree_bound_is_enforced() {
    let mut net = Network::new(mis(), generate::path(3, 2).unwrap(), 3);
    let err = net.apply(&ActionKind::AddEdge { u: 0, v: 1 });
    assert!(err.is_err());
    let err = net.apply(&ActionKind::AddNode { neighbors: vec![1] });
    assert!(err.is_err());
    let mut tri = Network::new(mis(), generate::path(3, 2).unwrap(), 3);
    tri.apply(&ActionKind::AddEdge { u: 0, v: 2 }).unwrap();
    assert_eq!(tri.graph().edge_count(), 3);
}

#[test]
fn one_corrupted_output_stays_local() {
    let g = generate::cycle(200, 2).unwrap();
    for seed in 0..20 {
        let mut net = Network::new(mis(), g.clone(), seed);
        let base = settle(&mut net);
        let v: NodeId = (seed as usize * 37) % 200;
        let mut locality = LocalityMonitor::new(&g, &base, &[v], 5);
        let t = net.round();
        net.schedule([AdversaryAction { round: t, kind: ActionKind::CorruptRegisters { nodes: vec![v], mask: CorruptMask::ALL } }]).unwrap();
        let w = net.protocol().params().confirm_window() as u64;
        let s = net
            .run_until_stable(100_000, w, |n: &mut Network<Mis>| locality.observe(n.round(), n.graph(), &n.host_config()))
            .unwrap();
        assert!(is_legal(&LclSpec::mis(), &g, &s.config));
        assert!(locality.violations.is_empty(), "{:?}", locality.violations);
        assert!(net.write_violations().is_empty());
    }
}

#[test]
fn removing_a_matched_node_resets_its_partner_quickly() {
    let g = generate::cycle(12, 2).unwrap();
    for seed in 0..10 {
        let mut net = Network::new(mm(), g.clone(), seed);
        let c = settle(&mut net);
        let e = (0..g.edge_count()).find(|&i| c.get(i) == Some(lcl_core::MAT)).unwrap();
        let (victim, _) = g.edges()[e].endpoints();
        net.apply(&ActionKind::RemoveNode { node: victim }).unwrap();
        net.run_round().unwrap();
        net.run_round().unwrap();
        assert!(is_strong(&LclSpec::maximal_matching(), net.graph(), &net.host_config()), "seed {seed}");
        let s = settle(&mut net);
        assert!(is_legal(&LclSpec::maximal_matching(), net.graph(), &s));
    }
}

fn faults_then_invariants<P: Protocol + Clone>(proto: P, lcl: LclSpec, pot: PotentialSpec, edge: bool) {
    for seed in 0..20u64 {
        let mut rng = RngStream::from_seed(seed);
        let g = generate::random_bounded(40, 0.1, 4, &mut rng).unwrap();
        let mut net = Network::new(proto.clone(), g.clone(), seed);
        settle(&mut net);
        let start = net.round();
        let k = 1 + seed as usize % 6;
        let faults = random_fault_schedule(&g, k, 1 + seed as usize % 2, &FaultKind::ALL, start + 1, seed).unwrap();
        net.schedule(faults).unwrap();
        while net.has_pending_actions() {
            net.run_round().unwrap();
        }
        let tb = net.round();
        let params = net.protocol().params();
        let mut inv = InvariantMonitor::new(tb + params.strong_offset as u64, lcl.clone(), pot.clone());
        let mut consistent = true;
        let w = params.confirm_window() as u64;
        let s = net
            .run_until_stable(100_000, w, |n: &mut Network<P>| {
                inv.observe(n.round(), n.graph(), &n.host_config());
                if edge && n.round() >= tb + 2 {
                    consistent &= n.port_consistent();
                }
            })
            .unwrap();
        assert!(is_legal(&lcl, net.graph(), &s.config), "seed {seed}");
        assert!(inv.report.clean(), "seed {seed}: {:?}", inv.report);
        assert!(consistent, "seed {seed}");
        assert!(net.write_violations().is_empty(), "seed {seed}");
    }
}

#[test]
fn post_fault_invariants_hold_for_mis() {
    faults_then_invariants(mis(), LclSpec::mis(), PotentialSpec::mis(), false);
}

#[test]
fn post_fault_invariants_hold_for_mm() {
    faults_then_invariants(mm(), LclSpec::maximal_matching(), PotentialSpec::mm(), true);
}

#[test]
fn trace_lines_are_json() {
    let g: Graph = generate::path(4, 2).unwrap();
    let mut net = Network::new(mis(), g.clone(), 1);
    let mut w = TraceWriter::new(Vec::new());
    let mut prev: Option<Configuration> = None;
    for _ in 0..10 {
        let c = net.host_config();
        let r = TraceRecord::capture(net.round(), &g, &c, prev.as_ref(), &LclSpec::mis(), &PotentialSpec::mis());
        w.write(&r).unwrap();
        prev = Some(c);
        net.run_round().unwrap();
    }
    let text = String::from_utf8(w.into_inner()).unwrap();
    let lines: Vec<TraceRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0].num_undecided, 4);
    assert_eq!(lines[0].potential, 6);
}
