use algorithms::{ColoringPhase, IncrementalPhase, MisPhase};
use graph_core::{Label, Multiset};
use lcl_core::LclSpec;
use pps::RngStream;
use proptest::prelude::*;
use transformer::NodePhase;

/// Whatever the verdict, a committed output satisfies the predicate against
/// the outputs already decided around it.
fn commits_are_content<Ph: NodePhase>(ph: &Ph, lcl: &LclSpec, delta: usize, labels: &[u16], seed: u64) -> Result<(), TestCaseError> {
    let alphabet = lcl.alphabet();
    let m = Multiset::from_labels(alphabet, labels.iter().take(delta).map(|&l| Label(1 + l % alphabet as u16)));
    let mut rng = RngStream::from_seed(seed);
    for _ in 0..8 {
        let v = ph.random_verdict(delta, &mut rng);
        if let Some(o) = ph.resolve(&v, &m) {
            prop_assert!(lcl.holds(o, &m), "{} commits {o:?} next to {m:?} with {v:?}", lcl.name());
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn mis_commits_are_content(labels in proptest::collection::vec(any::<u16>(), 0..8), seed: u64) {
        commits_are_content(&MisPhase, &LclSpec::mis(), 6, &labels, seed)?;
    }

    #[test]
    fn coloring_commits_are_content(delta in 1usize..7, extra in 0usize..3, labels in proptest::collection::vec(any::<u16>(), 0..8), seed: u64) {
        let palette = delta + 1 + extra;
        let ph = ColoringPhase::new(palette, delta).unwrap();
        commits_are_content(&ph, &LclSpec::proper_coloring(palette), delta, &labels, seed)?;
    }

    #[test]
    fn incremental_commits_are_content(c in 2usize..8, labels in proptest::collection::vec(any::<u16>(), 0..8), seed: u64) {
        commits_are_content(&IncrementalPhase::new(c), &LclSpec::incremental_coloring(c), 7, &labels, seed)?;
    }

    /// A node whose neighbourhood already forces the top color takes it
    /// whether or not it was a candidate.
    #[test]
    fn incremental_top_color_needs_no_candidate(c in 2usize..7, fill in proptest::collection::vec(0usize..6, 1..6)) {
        let ph = IncrementalPhase::new(c);
        let mut m = Multiset::empty(c);
        for i in 1..c {
            m.insert(Label(i as u16));
        }
        for f in fill {
            m.insert(Label(1 + (f % c) as u16));
        }
        prop_assert_eq!(ph.resolve(&false, &m), Some(Label(c as u16)));
        prop_assert_eq!(ph.resolve(&true, &m), Some(Label(c as u16)));
    }
}
