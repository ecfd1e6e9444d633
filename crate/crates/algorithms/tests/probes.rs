use algorithms::{build, ProblemSpec, PROBLEMS};

#[test]
fn phases_decide_respectfully_and_finish_at_zero_potential() {
    for name in PROBLEMS {
        let problem = build(&ProblemSpec::new(name, 4)).unwrap();
        let r = problem.probe(150, 12, 21);
        assert!(r.respectful(), "{name}: {r:?}");
        assert!(r.complete_when_zero(), "{name}: {r:?}");
        assert!(r.zero_potential_trials > 0 && r.positive_trials > 0, "{name}: {r:?}");
    }
}

#[test]
fn mis_and_mm_make_progress() {
    for name in ["mis", "mm"] {
        let r = build(&ProblemSpec::new(name, 4)).unwrap().probe(300, 20, 22);
        assert!(r.beta_lower_99 > 0.0, "{name}: {r:?}");
    }
}
