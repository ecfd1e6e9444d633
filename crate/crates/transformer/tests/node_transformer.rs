mod common;

use common::ToyMis;
use engine::Network;
use graph_core::{generate, Configuration, Graph, Label};
use lcl_core::{is_legal, LclSpec, PotentialSpec, IN, OUT};
use pps::{PpsState, RngStream, Step, StreamKey};
use proptest::prelude::*;
use transformer::{NodeMsg, NodeTransformer, PhaseField, PhaseRunner};

fn toy() -> NodeTransformer<ToyMis> {
    NodeTransformer::new("toy-mis", ToyMis, LclSpec::mis(), PotentialSpec::mis(), 1).unwrap()
}

fn edge_net() -> Network<NodeTransformer<ToyMis>> {
    Network::new(toy(), Graph::from_edges(&[(0, 1)], 2).unwrap(), 7)
}

fn msg(detect: Option<Label>, phase: PhaseField<(bool, usize)>, pps: Step) -> NodeMsg<(bool, usize)> {
    NodeMsg { detect, phase, pps }
}

fn random_graph(n: usize, seed: u64) -> Graph {
    let mut rng = RngStream::from_seed(seed);
    generate::random_bounded(n, 0.3, 4, &mut rng).unwrap()
}

#[test]
fn decided_node_with_consistent_neighborhood_announces() {
    let mut net = edge_net();
    net.state_mut(0).out = Some(IN);
    net.inbox_mut(0)[0] = msg(Some(OUT), PhaseField::Nil, Step::Hold);
    net.run_round().unwrap();
    assert_eq!(net.state(0).out, Some(IN));
    assert!(!net.state(0).wait);
    let sent = &net.inbox(1)[0];
    assert_eq!(sent.phase, PhaseField::Announce(Some(IN)));
    assert_eq!(sent.detect, Some(IN));
    assert!(net.write_violations().is_empty());
}

#[test]
fn decided_node_with_violation_resets_and_waits() {
    let mut net = edge_net();
    net.state_mut(0).out = Some(IN);
    net.state_mut(0).pps = PpsState::new(Step::At(1), 3);
    net.inbox_mut(0)[0] = msg(Some(IN), PhaseField::Nil, Step::Hold);
    net.run_round().unwrap();
    assert_eq!(net.state(0).out, None);
    assert!(net.state(0).wait);
    let sent = &net.inbox(1)[0];
    assert_eq!(sent.phase, PhaseField::Nil);
    assert_eq!(sent.detect, None);
    assert!(net.write_violations().is_empty());
}

#[test]
fn neighbor_in_hold_is_not_engaged() {
    let mut net = edge_net();
    net.state_mut(0).pps = PpsState::new(Step::At(1), 3);
    net.inbox_mut(0)[0] = msg(None, PhaseField::Nil, Step::Hold);
    net.run_round().unwrap();
    assert_eq!(net.state(0).engaged, vec![false]);

    let mut net = edge_net();
    net.state_mut(0).pps = PpsState::new(Step::At(1), 3);
    net.inbox_mut(0)[0] = msg(None, PhaseField::Announce(None), Step::At(0));
    net.run_round().unwrap();
    assert_eq!(net.state(0).engaged, vec![true]);
    assert!(matches!(net.inbox(1)[0].phase, PhaseField::Work(_)));
}

#[test]
fn waiting_node_stays_silent_until_hold() {
    let mut net = edge_net();
    net.state_mut(0).wait = true;
    net.state_mut(0).pps = PpsState::new(Step::At(0), 3);
    net.run_round().unwrap();
    assert_eq!(net.inbox(1)[0].phase, PhaseField::Nil);
    assert!(net.state(0).wait);

    let mut net = edge_net();
    net.state_mut(0).wait = true;
    net.run_round().unwrap();
    assert!(!net.state(0).wait);
}

#[test]
fn waiting_node_never_decides() {
    let mut net = edge_net();
    net.state_mut(0).wait = true;
    net.state_mut(0).pps = PpsState::new(Step::At(2), 3);
    net.inbox_mut(0)[0] = msg(None, PhaseField::Work((true, 0)), Step::At(1));
    net.run_round().unwrap();
    assert_eq!(net.state(0).out, None);
}

/// With every node leaving ℏ together, a phase of the transformed
/// algorithm is one synchronized phase, drawn from the same streams.
#[test]
fn forced_sync_matches_synchronized_phases() {
    let phi = 3u64;
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 19);
        let g = random_graph(n, seed);
        let mut net = Network::new(toy(), g.clone(), seed).with_forced_sync(true);
        let mut runner = PhaseRunner::new(seed);
        let mut expected = Configuration::undecided_for(graph_core::Kind::Node, &g);
        net.run_round().unwrap();
        let mut phases = 0;
        while !expected.is_complete(&g) {
            phases += 1;
            assert!(phases < 200, "seed {seed} did not finish");
            for _ in 0..=phi {
                net.run_round().unwrap();
            }
            expected = runner.node_phase(&ToyMis, &LclSpec::mis(), &g, &expected, StreamKey::Node);
            assert_eq!(net.host_config(), expected, "seed {seed} round {}", net.round());
        }
        assert!(is_legal(&LclSpec::mis(), &g, &expected), "seed {seed}");
        assert!(net.write_violations().is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stabilizes_without_unlogged_writes(seed in any::<u64>(), n in 2usize..16) {
        let g = random_graph(n, seed);
        let mut net = Network::new(toy(), g.clone(), seed);
        net.randomize_all();
        let stable = net.run_until_stable(5_000, 8, |_| {}).unwrap();
        prop_assert!(is_legal(&LclSpec::mis(), &g, &stable.config));
        prop_assert!(net.write_violations().is_empty());
    }

    #[test]
    fn legal_configurations_are_kept(seed in any::<u64>(), n in 2usize..16) {
        let g = random_graph(n, seed);
        let mut net = Network::new(toy(), g.clone(), seed);
        let first = net.run_until_stable(5_000, 8, |_| {}).unwrap().config;
        for _ in 0..40 {
            net.run_round().unwrap();
            prop_assert_eq!(&net.host_config(), &first);
        }
    }
}
