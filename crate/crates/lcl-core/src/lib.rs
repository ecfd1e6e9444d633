//! Locally checkable labelings over a finite output alphabet: predicates,
//! contentness and legality, cores and the supportive digraph, influence
//! numbers, core coverage, and locally separable potential functions.

mod check;
mod cores;
mod error;
mod potential;
mod spec;

pub use check::{content_set, is_content, is_legal, is_strong, uncontent};
pub use cores::{
    analysis_bound, analyze, build_supportive_digraph, check_core_coverage, compute_cores, core_bound, influence_number, CoverageReport,
    CoverageViolation, EligibilityReport, SupportiveDigraph,
};
pub use error::LclError;
pub use potential::{builtin_potential, potential, Coefficient, PotentialSpec};
pub use spec::{LclSpec, Rule, IN, MAT, OUT, UNM};
