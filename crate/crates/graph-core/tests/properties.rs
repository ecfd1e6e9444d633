use graph_core::{clone_graph, generate, line_graph, Graph, Label, Multiset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.node_count();
    if n != h.node_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, g: &Graph, h: &Graph) -> bool {
        if k == 1 {
            return g.edge_pairs().iter().all(|&(u, v)| h.has_edge(perm[u], perm[v]));
        }
        for i in 0..k {
            if heap(k - 1, perm, g, h) {
                return true;
            }
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
        false
    }
    heap(n, &mut perm, g, h)
}

#[test]
fn line_graph_of_cycle_is_cycle() {
    for n in 3..=8 {
        let c = generate::cycle(n, 2).unwrap();
        let (lg, _) = line_graph(&c);
        assert!(is_isomorphic(&lg, &c), "n={n}");
    }
}

#[test]
fn isomorphism_oracle_rejects_non_isomorphic_pairs() {
    let p4 = generate::path(4, 3).unwrap();
    let s3 = generate::star(3, 3).unwrap();
    assert!(!is_isomorphic(&p4, &s3));
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..=12, 1usize..=5, 0.0f64..0.6, any::<u64>()).prop_map(|(n, delta, p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        generate::random_bounded(n, p, delta, &mut rng).unwrap()
    })
}

fn arb_multiset() -> impl Strategy<Value = Multiset> {
    proptest::collection::vec(1u16..=4, 0..=6).prop_map(|ls| Multiset::from_labels(4, ls.into_iter().map(Label)))
}

proptest! {
    #[test]
    fn line_graph_degrees(g in arb_graph()) {
        let (lg, map) = line_graph(&g);
        prop_assert!(lg.max_degree() <= lg.delta());
        for i in lg.nodes() {
            let (u, v) = map.edge(i).endpoints();
            prop_assert_eq!(lg.degree(i), g.degree(u) + g.degree(v) - 2);
        }
        for (i, j) in lg.edge_pairs() {
            let (a, b) = (map.edge(i), map.edge(j));
            let (u, v) = a.endpoints();
            prop_assert!(b.touches(u) ^ b.touches(v));
        }
    }

    #[test]
    fn clone_graph_size(g in arb_graph(), alpha in 1usize..=4) {
        let (cg, map) = clone_graph(&g, alpha);
        let n = g.node_count();
        prop_assert_eq!(cg.node_count(), alpha * n);
        prop_assert_eq!(cg.edge_count(), n * alpha * (alpha - 1) / 2 + alpha * g.edge_count());
        prop_assert!(cg.max_degree() <= g.delta() + alpha - 1);
        for v in g.nodes() {
            for i in 0..alpha {
                prop_assert_eq!(map.clone_of(map.handle(v, i)), (v, i));
            }
        }
    }

    #[test]
    fn multiset_lattice(a in arb_multiset(), b in arb_multiset(), c in arb_multiset()) {
        prop_assert_eq!(a.size(), a.counts().iter().map(|&x| x as usize).sum::<usize>());
        prop_assert!(a.is_subset(&a.union(&b)));
        prop_assert!(a.intersection(&b).is_subset(&a));
        prop_assert!(a.is_subset(&a));
        if a.is_subset(&b) && b.is_subset(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.is_subset(&b) && b.is_subset(&c) {
            prop_assert!(a.is_subset(&c));
        }
    }

    #[test]
    fn mutations_preserve_port_bijection(g in arb_graph(), ops in proptest::collection::vec((0u8..4, any::<u16>(), any::<u16>()), 0..12)) {
        let mut g = g;
        for (op, x, y) in ops {
            let live: Vec<_> = g.nodes().collect();
            if live.is_empty() {
                break;
            }
            let u = live[x as usize % live.len()];
            let v = live[y as usize % live.len()];
            match op {
                0 => { let _ = g.add_edge(u, v); }
                1 => { let _ = g.remove_edge(u, v); }
                2 => {
                    let d = g.degree(u);
                    let perm: Vec<_> = (0..d).rev().collect();
                    g.permute_ports(u, &perm).unwrap();
                }
                _ => { let _ = g.remove_node(u); }
            }
            for w in g.nodes() {
                prop_assert!(g.degree(w) <= g.delta());
                for p in 0..g.degree(w) {
                    let z = g.neighbor(w, p);
                    prop_assert!(g.is_alive(z));
                    prop_assert_eq!(g.neighbor(z, g.reverse_port(w, p)), w);
                }
            }
        }
    }
}
