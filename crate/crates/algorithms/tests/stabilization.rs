use algorithms::{build, ProblemSpec, Visitor, PROBLEMS};
use engine::{Network, Protocol};
use graph_core::{generate, Graph};
use lcl_core::is_legal;
use pps::{RngStream, StreamKey, Tag};

struct FromRandom {
    graph: Graph,
    seed: u64,
}

impl Visitor for FromRandom {
    type Output = Option<u64>;

    fn visit<P: Protocol + Clone + 'static>(self, proto: P) -> Option<u64> {
        let window = proto.params().confirm_window() as u64;
        let mut net = Network::new(proto, self.graph, self.seed);
        net.randomize_all();
        let stable = net.run_until_stable(20_000, window, |_| {}).ok()?;
        assert!(is_legal(net.protocol().lcl(), net.graph(), &stable.config));
        assert!(net.write_violations().is_empty(), "{:?}", &net.write_violations()[..1]);
        Some(stable.round)
    }
}

#[test]
fn every_problem_stabilizes_from_random_states() {
    for name in PROBLEMS {
        for seed in 0..5u64 {
            let mut rng = RngStream::derive(seed, StreamKey::Aux(1), Tag::Init);
            let delta = 3 + seed as usize % 3;
            let g = generate::random_bounded(12 + 3 * seed as usize, 0.3, delta, &mut rng).unwrap();
            let problem = build(&ProblemSpec::new(name, delta)).unwrap();
            let t = problem.algorithm.visit(FromRandom { graph: g, seed });
            assert!(t.is_some(), "{name} seed {seed} did not stabilize");
        }
    }
}
