use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::RngStream;

/// A value of the step register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    /// ℏ, the holding state.
    Hold,
    At(u16),
}

impl Step {
    pub fn is_hold(self) -> bool {
        self == Step::Hold
    }

    /// Position in `S_φ` with ℏ first: ℏ ↦ 0, j ↦ j+1.
    pub fn index(self) -> usize {
        match self {
            Step::Hold => 0,
            Step::At(j) => j as usize + 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Step::Hold
        } else {
            Step::At(i as u16 - 1)
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Hold => write!(f, "ℏ"),
            Step::At(j) => write!(f, "{j}"),
        }
    }
}

/// Step register together with its phase length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PpsState {
    step: Step,
    phi: u16,
}

impl PpsState {
    /// Panics unless `phi ≥ 2` and `step ∈ S_φ`.
    pub fn new(step: Step, phi: u16) -> Self {
        assert!(phi >= 2, "phase length must be at least 2");
        if let Step::At(j) = step {
            assert!(j < phi, "step {j} outside S_{phi}");
        }
        PpsState { step, phi }
    }

    pub fn hold(phi: u16) -> Self {
        Self::new(Step::Hold, phi)
    }

    pub fn phi(&self) -> u16 {
        self.phi
    }

    pub fn step(&self) -> Step {
        self.step
    }

    /// `S_φ` in index order.
    pub fn states(phi: u16) -> impl Iterator<Item = PpsState> {
        (0..=phi as usize).map(move |i| PpsState::new(Step::from_index(i), phi))
    }

    /// Uniform over `S_φ`; the corruption distribution of the register.
    pub fn random(phi: u16, rng: &mut impl Rng) -> Self {
        Self::new(Step::from_index(rng.gen_range(0..=phi as usize)), phi)
    }

    /// Same as [`step_counter`] but with an explicit exit coin; the coin is
    /// ignored outside ℏ.
    pub fn advance_with(self, exit: bool) -> Self {
        let step = match self.step {
            Step::Hold if exit => Step::At(0),
            Step::Hold => Step::Hold,
            Step::At(j) if j + 1 == self.phi => Step::Hold,
            Step::At(j) => Step::At(j + 1),
        };
        PpsState { step, ..self }
    }
}

/// One transition of the chain. Draws a single coin at ℏ and nothing
/// elsewhere.
pub fn step_counter(s: PpsState, rng: &mut RngStream) -> PpsState {
    let exit = s.step.is_hold() && rng.coin();
    s.advance_with(exit)
}

pub fn get_step(s: &PpsState) -> Step {
    s.step
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_segment() {
        let mut rng = RngStream::from_seed(1);
        for phi in 2..8u16 {
            for j in 0..phi - 1 {
                let s = step_counter(PpsState::new(Step::At(j), phi), &mut rng);
                assert_eq!(get_step(&s), Step::At(j + 1));
            }
            let s = step_counter(PpsState::new(Step::At(phi - 1), phi), &mut rng);
            assert_eq!(get_step(&s), Step::Hold);
        }
    }

    #[test]
    fn hold_exits_half_the_time() {
        let mut rng = RngStream::from_seed(7);
        let n = 100_000;
        let exits = (0..n).filter(|_| step_counter(PpsState::hold(4), &mut rng).step() == Step::At(0)).count();
        assert!((exits as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn draws_only_at_hold() {
        let mut a = RngStream::from_seed(3);
        let mut b = RngStream::from_seed(3);
        step_counter(PpsState::new(Step::At(1), 4), &mut a);
        assert_eq!(a.coin(), b.coin());
        step_counter(PpsState::hold(4), &mut a);
        b.coin();
        assert_eq!(a.below(1000), b.below(1000));
    }

    #[test]
    fn get_step_is_idempotent() {
        let s = PpsState::new(Step::At(0), 3);
        assert_eq!(get_step(&s), get_step(&s));
        assert_eq!(get_step(&PpsState::hold(3)), Step::Hold);
    }

    #[test]
    fn display() {
        assert_eq!(Step::Hold.to_string(), "ℏ");
        assert_eq!(Step::At(2).to_string(), "2");
    }
}
