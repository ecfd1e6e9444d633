use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{step_counter, PpsState, RngStream, Step, StreamKey, Tag};

/// Transition matrix of the chain over `S_φ` in [`Step::index`] order.
pub fn transition_matrix(phi: u16) -> Vec<Vec<f64>> {
    let n = phi as usize + 1;
    let mut p = vec![vec![0.0; n]; n];
    p[0][0] = 0.5;
    p[0][1] = 0.5;
    for j in 1..n - 1 {
        p[j][j + 1] = 1.0;
    }
    p[n - 1][0] = 1.0;
    p
}

/// Law of the step register after `t` rounds from `start`.
pub fn distribution_after(phi: u16, start: Step, t: usize) -> Vec<f64> {
    let p = transition_matrix(phi);
    let mut d = vec![0.0; p.len()];
    d[start.index()] = 1.0;
    for _ in 0..t {
        d = push(&p, &d);
    }
    d
}

fn push(p: &[Vec<f64>], d: &[f64]) -> Vec<f64> {
    let mut next = vec![0.0; d.len()];
    for (i, &x) in d.iter().enumerate() {
        if x != 0.0 {
            for (j, &q) in p[i].iter().enumerate() {
                next[j] += x * q;
            }
        }
    }
    next
}

/// `π(ℏ) = 2/(φ+2)`, `π(j) = 1/(φ+2)`.
pub fn stationary(phi: u16) -> Vec<f64> {
    let z = phi as f64 + 2.0;
    let mut v = vec![1.0 / z; phi as usize + 1];
    v[0] = 2.0 / z;
    v
}

/// Smallest `τ` such that `Pr(step_t = 0 | step_0 = j0) ≥ 1/(2φ)` for every
/// start `j0` and every `τ ≤ t ≤ horizon`, computed exactly. `None` when the
/// bound fails at the horizon (φ = 2, where `1/(2φ)` is the limit itself).
pub fn calibrate_tau(phi: u16, horizon: usize) -> Option<usize> {
    let p = transition_matrix(phi);
    let target = 1.0 / (2.0 * phi as f64);
    let mut rows: Vec<Vec<f64>> = (0..p.len()).map(|i| (0..p.len()).map(|j| (i == j) as u8 as f64).collect()).collect();
    let mut last_bad = None;
    for t in 0..=horizon {
        if rows.iter().any(|r| r[1] < target) {
            last_bad = Some(t);
        }
        rows = rows.iter().map(|r| push(&p, r)).collect();
    }
    match last_bad {
        Some(t) if t == horizon => None,
        Some(t) => Some(t + 1),
        None => Some(0),
    }
}

/// Contents of `calibration.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub horizon: usize,
    pub tau: BTreeMap<u16, usize>,
}

impl Calibration {
    pub fn compute(phis: impl IntoIterator<Item = u16>, horizon: usize) -> Self {
        let tau = phis.into_iter().filter_map(|phi| calibrate_tau(phi, horizon).map(|t| (phi, t))).collect();
        Calibration { horizon, tau }
    }
}

pub const CALIBRATION_JSON: &str = include_str!("../calibration.json");

/// τ recorded in the calibration file.
pub fn calibrated_tau(phi: u16) -> Option<usize> {
    let c: Calibration = serde_json::from_str(CALIBRATION_JSON).expect("calibration file parses");
    c.tau.get(&phi).copied()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MixingError {
    NoSamples,
    NoWarmup,
    PhaseTooShort(u16),
}

impl fmt::Display for MixingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixingError::NoSamples => write!(f, "samples must be at least 1"),
            MixingError::NoWarmup => write!(f, "warmup must be at least 1"),
            MixingError::PhaseTooShort(phi) => write!(f, "phase length {phi} is below 2"),
        }
    }
}

impl std::error::Error for MixingError {}

/// Empirical law of the step register after `warmup` rounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingProfile {
    pub phi: u16,
    pub warmup: usize,
    pub samples: usize,
    /// Per state, in [`Step::index`] order.
    pub freq: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl MixingProfile {
    pub fn states(&self) -> impl Iterator<Item = (Step, f64, f64)> + '_ {
        (0..self.freq.len()).map(|i| (Step::from_index(i), self.freq[i], self.stderr[i]))
    }
}

/// Runs `samples` independent chains, spread evenly over the start states,
/// for `warmup` rounds each and tallies where they end.
pub fn mixing_profile(phi: u16, warmup: usize, samples: usize, seed: u64) -> Result<MixingProfile, MixingError> {
    if phi < 2 {
        return Err(MixingError::PhaseTooShort(phi));
    }
    if samples == 0 {
        return Err(MixingError::NoSamples);
    }
    if warmup == 0 {
        return Err(MixingError::NoWarmup);
    }
    let n = phi as usize + 1;
    let mut counts = vec![0u64; n];
    for chain in 0..samples {
        let start = Step::from_index(chain % n);
        counts[run_chain(phi, start, warmup, seed, chain).index()] += 1;
    }
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let stderr = freq.iter().map(|p| (p * (1.0 - p) / samples as f64).sqrt()).collect();
    Ok(MixingProfile { phi, warmup, samples, freq, stderr })
}

fn run_chain(phi: u16, start: Step, rounds: usize, seed: u64, chain: usize) -> Step {
    let mut rng = RngStream::derive(seed, StreamKey::Aux(chain as u64), Tag::Pps);
    let mut s = PpsState::new(start, phi);
    for _ in 0..rounds {
        s = step_counter(s, &mut rng);
    }
    s.step()
}

/// Estimate of `Pr(step_t = 0 | step_0 = start)` with its standard error.
pub fn phase_start_probability(phi: u16, start: Step, t: usize, samples: usize, seed: u64) -> (f64, f64) {
    let offset = start.index() * samples;
    let hits = (0..samples).filter(|&i| run_chain(phi, start, t, seed, offset + i) == Step::At(0)).count();
    let p = hits as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_is_fixed_point() {
        for phi in 2..9 {
            let pi = stationary(phi);
            let next = push(&transition_matrix(phi), &pi);
            for (a, b) in pi.iter().zip(&next) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_degenerate_arguments() {
        assert_eq!(mixing_profile(4, 10, 0, 1), Err(MixingError::NoSamples));
        assert_eq!(mixing_profile(4, 0, 10, 1), Err(MixingError::NoWarmup));
        assert_eq!(mixing_profile(1, 10, 10, 1), Err(MixingError::PhaseTooShort(1)));
    }

    #[test]
    fn phi_two_has_no_tau() {
        assert_eq!(calibrate_tau(2, 500), None);
    }
}
