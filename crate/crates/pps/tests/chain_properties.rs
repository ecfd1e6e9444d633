use pps::*;
use proptest::prelude::*;

/// Exact `Pr(step_t = 0)` by enumerating every coin sequence. Exit coins
/// are consumed only at ℏ, so a path of `t` rounds uses at most `t` coins.
fn brute_force_hits(phi: u16, start: Step, t: usize) -> f64 {
    let mut total = 0.0;
    for bits in 0u32..(1 << t) {
        let mut s = PpsState::new(start, phi);
        let mut used = 0;
        for _ in 0..t {
            let exit = if s.step().is_hold() {
                used += 1;
                bits >> (used - 1) & 1 == 1
            } else {
                false
            };
            s = s.advance_with(exit);
        }
        if s.step() == Step::At(0) {
            total += 1.0 / (1u64 << used) as f64 / (1u64 << (t - used)) as f64;
        }
    }
    total
}

#[test]
fn exact_distribution_matches_path_enumeration() {
    for phi in 2..=5u16 {
        for start in PpsState::states(phi) {
            for t in 0..=12 {
                let exact = distribution_after(phi, start.step(), t)[Step::At(0).index()];
                let brute = brute_force_hits(phi, start.step(), t);
                assert!((exact - brute).abs() < 1e-12, "φ={phi} {} t={t}", start.step());
            }
        }
    }
}

#[test]
fn stationary_values() {
    let pi = stationary(4);
    assert!((pi[0] - 1.0 / 3.0).abs() < 1e-12);
    assert!(pi[1..].iter().all(|&p| (p - 1.0 / 6.0).abs() < 1e-12));
    assert!((stationary(2)[0] - 0.5).abs() < 1e-12);
}

#[test]
fn calibration_file_matches_exact_computation() {
    let file: Calibration = serde_json::from_str(CALIBRATION_JSON).unwrap();
    let recomputed = Calibration::compute(3..=8, file.horizon);
    assert_eq!(file, recomputed);
    for phi in 3..=5u16 {
        let tau = calibrated_tau(phi).unwrap();
        let target = 1.0 / (2.0 * phi as f64);
        for start in PpsState::states(phi) {
            assert!(distribution_after(phi, start.step(), tau)[1] >= target);
        }
        let before = PpsState::states(phi).any(|s| distribution_after(phi, s.step(), tau - 1)[1] < target);
        assert!(before, "τ for φ={phi} is not minimal");
    }
}

#[test]
fn empirical_profile_near_stationary() {
    let p = mixing_profile(4, 200, 100_000, 11).unwrap();
    assert!((p.freq[0] - 1.0 / 3.0).abs() < 0.01);
    for f in &p.freq[1..] {
        assert!((f - 1.0 / 6.0).abs() < 0.01);
    }
    let q = mixing_profile(2, 200, 100_000, 12).unwrap();
    assert!((q.freq[0] - 0.5).abs() < 0.01);
}

#[test]
fn empirical_phase_start_matches_exact_law() {
    for phi in 3..=5u16 {
        let tau = calibrated_tau(phi).unwrap();
        for start in PpsState::states(phi) {
            let (p, se) = phase_start_probability(phi, start.step(), tau, 20_000, 5);
            let exact = distribution_after(phi, start.step(), tau)[1];
            assert!((p - exact).abs() < 5.0 * se.max(1e-3), "φ={phi} {}", start.step());
        }
    }
}

#[test]
fn exits_of_separate_streams_are_independent() {
    let rounds = 40_000;
    let mut a = RngStream::derive(3, StreamKey::Node(0), Tag::Pps);
    let mut b = RngStream::derive(3, StreamKey::Node(1), Tag::Pps);
    let mut table = [[0f64; 2]; 2];
    for _ in 0..rounds {
        let x = step_counter(PpsState::hold(3), &mut a).step() == Step::At(0);
        let y = step_counter(PpsState::hold(3), &mut b).step() == Step::At(0);
        table[x as usize][y as usize] += 1.0;
    }
    let n = rounds as f64;
    let mut chi2 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let row = table[i][0] + table[i][1];
            let col = table[0][j] + table[1][j];
            let e = row * col / n;
            chi2 += (table[i][j] - e).powi(2) / e;
        }
    }
    // 1 degree of freedom, p = 0.001.
    assert!(chi2 < 10.83, "χ² = {chi2}");
}

proptest! {
    #[test]
    fn never_leaves_state_space(phi in 2u16..10, start in 0usize..10, seed in any::<u64>()) {
        let mut rng = RngStream::from_seed(seed);
        let mut s = PpsState::new(Step::from_index(start % (phi as usize + 1)), phi);
        for _ in 0..2_000 {
            s = step_counter(s, &mut rng);
            if let Step::At(j) = s.step() {
                prop_assert!(j < phi);
            }
        }
    }

    #[test]
    fn equal_chains_stay_aligned_until_hold(phi in 2u16..10, j in 0u16..9, s1 in any::<u64>(), s2 in any::<u64>()) {
        let j = j % (phi - 1);
        let mut a = PpsState::new(Step::At(j), phi);
        let mut b = a;
        let (mut ra, mut rb) = (RngStream::from_seed(s1), RngStream::from_seed(s2));
        while !a.step().is_hold() {
            a = step_counter(a, &mut ra);
            b = step_counter(b, &mut rb);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn same_seed_same_trajectory(phi in 2u16..8, seed in any::<u64>()) {
        let run = || {
            let mut rng = RngStream::from_seed(seed);
            let mut s = PpsState::hold(phi);
            (0..200).map(|_| { s = step_counter(s, &mut rng); s.step() }).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(), run());
    }
}
