mod common;

use common::ToyMis;
use engine::Network;
use graph_core::{clone_graph, generate, Kind};
use lcl_core::{is_legal, LclSpec, PotentialSpec};
use pps::{RngStream, StreamKey};
use transformer::{CloneHost, NodeTransformer};

/// Hosting the clones changes nothing about what they compute: the clone
/// level of the hosted run equals a direct run on the clone graph, round by
/// round.
#[test]
fn hosted_clones_match_direct_clone_graph_run() {
    for seed in 0..20u64 {
        let alpha = 1 + (seed as usize % 3);
        let mut rng = RngStream::from_seed(seed);
        let g = generate::random_bounded(10, 0.3, 3, &mut rng).unwrap();
        let host = CloneHost::new(
            "toy-clones",
            ToyMis,
            LclSpec::mis(),
            LclSpec::maximal_coloring(alpha + 1),
            PotentialSpec::mis(),
            1,
            alpha,
        )
        .unwrap();
        let mut hosted = Network::new(host, g.clone(), seed);
        let (cg, map) = clone_graph(&g, alpha);
        let direct_proto = NodeTransformer::new("direct", ToyMis, LclSpec::mis(), PotentialSpec::mis(), 1).unwrap();
        let mut direct = Network::new(direct_proto, cg.clone(), seed).with_keys(move |h| {
            let (v, i) = map.clone_of(h);
            StreamKey::Clone(v, i)
        });
        for r in 0..150 {
            assert_eq!(hosted.view_config(), direct.host_config(), "seed {seed} round {r}");
            hosted.run_round().unwrap();
            direct.run_round().unwrap();
        }
        let host_lcl = LclSpec::maximal_coloring(alpha + 1);
        if direct.host_config().is_complete(&cg) {
            assert!(is_legal(&host_lcl, &g, &hosted.host_config()));
        }
        assert_eq!(hosted.host_config().kind(), Kind::Node);
        assert!(hosted.write_violations().is_empty());
    }
}
