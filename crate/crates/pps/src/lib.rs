//! Probabilistic phase synchronization: a per-node Markov chain over
//! `{ℏ, 0, 1, …, φ−1}` standing in for a global modular clock.

mod chain;
mod mixing;
mod rng;

pub use chain::{get_step, step_counter, PpsState, Step};
pub use mixing::{
    calibrate_tau, calibrated_tau, distribution_after, mixing_profile, phase_start_probability, stationary,
    transition_matrix, Calibration, MixingError, MixingProfile, CALIBRATION_JSON,
};
pub use rng::{derive_seed, RngStream, StreamKey, Tag};
