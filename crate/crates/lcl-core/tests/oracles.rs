use graph_core::{Configuration, Graph, Kind, Label, Multiset};
use lcl_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every multiset over `alphabet` letters of size ≤ `bound`, by naive
/// recursion over sizes.
fn naive_multisets(alphabet: usize, bound: usize) -> Vec<Multiset> {
    let mut out = vec![Multiset::empty(alphabet)];
    let mut frontier = out.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for m in &frontier {
            let last = m.support().last().map(|l| l.index()).unwrap_or(0);
            for x in last..alphabet {
                let mut w = m.clone();
                w.insert(Label::from_index(x));
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn naive_cores(lcl: &LclSpec, o: Label, bound: usize) -> Vec<Multiset> {
    let sat: Vec<_> = naive_multisets(lcl.alphabet(), bound).into_iter().filter(|m| lcl.holds(o, m)).collect();
    let mut cores: Vec<_> =
        sat.iter().filter(|m| !sat.iter().any(|s| s != *m && s.is_subset(m))).cloned().collect();
    cores.sort();
    cores
}

fn ms(alphabet: usize, ls: &[u16]) -> Multiset {
    Multiset::from_labels(alphabet, ls.iter().map(|&l| Label(l)))
}

fn builtins(delta: usize) -> Vec<LclSpec> {
    let mut v = vec![
        LclSpec::mis(),
        LclSpec::proper_coloring(delta + 1),
        LclSpec::maximal_matching(),
        LclSpec::edge_coloring((5 * delta).div_ceil(2)),
    ];
    for c in 2..=(delta + 2).min(5) {
        v.push(LclSpec::maximal_coloring(c));
        v.push(LclSpec::incremental_coloring(c));
        v.push(LclSpec::incremental_edge_coloring(c));
    }
    v.push(LclSpec::maximal_edge_coloring(2 * delta));
    v
}

#[test]
fn frozen_cores() {
    assert_eq!(compute_cores(&LclSpec::mis(), IN, 6), vec![Multiset::empty(2)]);
    assert_eq!(compute_cores(&LclSpec::mis(), OUT, 6), vec![ms(2, &[1])]);
    let inc = LclSpec::incremental_coloring(3);
    assert_eq!(compute_cores(&inc, Label(3), 6), vec![ms(3, &[2, 2]), ms(3, &[1, 2]), ms(3, &[1, 1])]);
    assert_eq!(compute_cores(&inc, Label(2), 6), vec![ms(3, &[1])]);
    let max = LclSpec::maximal_coloring(4);
    assert_eq!(compute_cores(&max, Label(4), 5), vec![ms(4, &[1, 2, 3])]);
}

#[test]
fn cores_match_naive_enumeration() {
    for delta in 1..=4 {
        for lcl in builtins(delta) {
            let bound = core_bound(&lcl, delta);
            if lcl.alphabet() > 8 && bound > 4 {
                continue;
            }
            for o in lcl.labels() {
                assert_eq!(compute_cores(&lcl, o, bound), naive_cores(&lcl, o, bound), "{} {o:?} Δ={delta}", lcl.name());
            }
        }
    }
}

#[test]
fn frozen_digraphs() {
    let arcs = |l: &LclSpec, d: usize| build_supportive_digraph(l, d).arcs.into_iter().map(|(a, b)| (a.0, b.0)).collect::<Vec<_>>();
    assert_eq!(arcs(&LclSpec::mis(), 4), vec![(2, 1)]);
    assert!(arcs(&LclSpec::proper_coloring(5), 4).is_empty());
    assert_eq!(arcs(&LclSpec::maximal_coloring(4), 4), vec![(4, 1), (4, 2), (4, 3)]);
    assert_eq!(arcs(&LclSpec::incremental_coloring(3), 4), vec![(2, 1), (3, 1), (3, 2)]);
}

#[test]
fn influence_numbers() {
    let nu = |l: &LclSpec, d: usize| influence_number(&build_supportive_digraph(l, d)).unwrap();
    for delta in 2..=6 {
        assert_eq!(nu(&LclSpec::mis(), delta), 1);
        assert_eq!(nu(&LclSpec::proper_coloring(delta + 1), delta), 0);
        assert_eq!(nu(&LclSpec::maximal_matching(), delta), 1);
        assert_eq!(nu(&LclSpec::maximal_coloring(delta + 2), delta), 1);
        assert_eq!(analysis_bound(&LclSpec::maximal_coloring(delta + 2), delta), delta + 1);
        for c in 2..=(delta + 2).min(6) {
            assert_eq!(nu(&LclSpec::incremental_coloring(c), delta), c - 1);
        }
    }
    assert_eq!(nu(&LclSpec::edge_coloring(8), 3), 0);
}

#[test]
fn builtin_core_soundness_and_coverage() {
    for delta in 1..=5 {
        for lcl in builtins(delta) {
            if lcl.alphabet() > 8 && core_bound(&lcl, delta) > 6 {
                continue;
            }
            assert!(check_core_coverage(&lcl, delta).ok, "{} Δ={delta}", lcl.name());
            let bound = analysis_bound(&lcl, delta);
            let all = naive_multisets(lcl.alphabet(), bound);
            for o in lcl.labels() {
                let cores = compute_cores(&lcl, o, bound);
                assert!(!cores.is_empty());
                let sat: Vec<_> = all.iter().filter(|m| lcl.holds(o, m)).collect();
                for m in &all {
                    let above_core = cores.iter().any(|c| c.is_subset(m));
                    let below_sat = sat.iter().any(|s| m.is_subset(s));
                    if above_core && below_sat {
                        assert!(lcl.holds(o, m), "{} {o:?} {m:?}", lcl.name());
                    }
                    if lcl.holds(o, m) {
                        assert!(above_core);
                    }
                }
                for a in &cores {
                    for b in &cores {
                        assert!(a == b || !a.is_subset(b));
                    }
                }
            }
        }
    }
}

fn builtin_potentials() -> Vec<(PotentialSpec, usize)> {
    vec![
        (PotentialSpec::mis(), 2),
        (PotentialSpec::coloring(), 4),
        (PotentialSpec::incremental(2), 2),
        (PotentialSpec::incremental(3), 3),
        (PotentialSpec::incremental(4), 4),
        (PotentialSpec::mm(), 2),
        (PotentialSpec::edge_coloring(), 4),
    ]
}

#[test]
fn potential_coefficients_are_symmetric_antitone_and_bounded() {
    for (p, alphabet) in builtin_potentials() {
        let all = naive_multisets(alphabet, if alphabet > 3 { 4 } else { 6 });
        let top = p.sigma0();
        for a in &all {
            for b in &all {
                match p.kind {
                    Kind::Node => {
                        let s = p.sigma_pair(a, b);
                        assert_eq!(s, p.sigma_pair(b, a));
                        assert!(s <= top);
                    }
                    Kind::Edge => assert!(p.sigma_single(a) <= top),
                }
                if a.is_subset(b) {
                    match p.kind {
                        Kind::Node => {
                            for c in all.iter().step_by(7) {
                                assert!(p.sigma_pair(b, c) <= p.sigma_pair(a, c), "{} {a:?} {b:?}", p.name);
                            }
                        }
                        Kind::Edge => assert!(p.sigma_single(b) <= p.sigma_single(a)),
                    }
                }
            }
        }
    }
}

fn random_instance(seed: u64, n: usize, alphabet: u16) -> (Graph, Configuration, Configuration) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = graph_core::generate::random_bounded(n, 0.3, 4, &mut rng).unwrap();
    let c: Vec<_> = (0..n).map(|_| if rng.gen_bool(0.5) { Some(Label(rng.gen_range(1..=alphabet))) } else { None }).collect();
    let mut d = c.clone();
    for x in d.iter_mut() {
        if x.is_none() && rng.gen_bool(0.4) {
            *x = Some(Label(rng.gen_range(1..=alphabet)));
        }
    }
    (g, Configuration::node(c), Configuration::node(d))
}

proptest! {
    #[test]
    fn potential_never_grows_under_decisions(seed in any::<u64>(), n in 1usize..=12) {
        for (p, alphabet) in builtin_potentials() {
            let (g, c, d) = random_instance(seed, n, alphabet as u16);
            let (c, d, g) = match p.kind {
                Kind::Node => (c, d, g),
                Kind::Edge => {
                    let m = g.edge_count();
                    let take = |x: &Configuration| Configuration::edge((0..m).map(|i| x.get(i % n)).collect());
                    (take(&c), take(&d), g)
                }
            };
            prop_assert!(potential(&p, &g, &d).unwrap() <= potential(&p, &g, &c).unwrap());
        }
    }

    #[test]
    fn potential_never_grows_on_subgraphs(seed in any::<u64>(), n in 2usize..=12) {
        let (g, c, _) = random_instance(seed, n, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut h = g.clone();
        for x in c.undecided(&g) {
            if rng.gen_bool(0.3) {
                h.remove_node(x).unwrap();
            }
        }
        let p = PotentialSpec::mis();
        prop_assert!(potential(&p, &h, &c).unwrap() <= potential(&p, &g, &c).unwrap());
    }
}
