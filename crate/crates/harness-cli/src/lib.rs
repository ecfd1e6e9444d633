//! Experiment harness: configuration, fault sweeps with stabilization and
//! locality measurements, the log-k fit, PPS mixing profiles and
//! eligibility reports, all written as CSV or JSON.

mod config;
mod experiment;
pub mod stats;

use std::io;
use std::path::Path;

use algorithms::{build, AlgorithmError, ProblemSpec};
use engine::EngineError;
use lcl_core::EligibilityReport;
use pps::{mixing_profile, MixingError, Step};
use serde::Serialize;
use thiserror::Error;
use transformer::ProbeReport;

pub use config::{ExperimentConfig, Format, GraphSpec};
pub use experiment::{cmd_run, cmd_scale, run_trials, Aggregate, RunReport, ScaleReport, ScaleRow, TrialRecord};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Engine(EngineError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<EngineError> for HarnessError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::KTooLarge { .. } | EngineError::InvalidSchedule(_) => HarnessError::Config(e.to_string()),
            e => HarnessError::Engine(e),
        }
    }
}

impl From<MixingError> for HarnessError {
    fn from(e: MixingError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

/// Process exit codes of `lclstab`.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const ASSERTION: i32 = 2;
    pub const TIMEOUT: i32 = 3;
}

/// Exit code for a finished sweep: violated checks win over timeouts.
pub fn exit_code(records: &[TrialRecord]) -> i32 {
    if records.iter().any(TrialRecord::failed) {
        exit::ASSERTION
    } else if records.iter().any(|r| r.timeout) {
        exit::TIMEOUT
    } else {
        exit::OK
    }
}

/// Writes rows as CSV (header, LF endings) or as a JSON array.
pub fn write_records<T: Serialize>(rows: &[T], format: Format, out: impl io::Write) -> Result<(), HarnessError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// [`write_records`] into `path`, or to stdout when there is none.
pub fn emit<T: Serialize>(rows: &[T], format: Format, path: Option<&Path>) -> Result<(), HarnessError> {
    match path {
        Some(p) => write_records(rows, format, io::BufWriter::new(std::fs::File::create(p)?)),
        None => write_records(rows, format, io::stdout().lock()),
    }
}

/// One state of a mixing profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixRow {
    /// `hold` or the step index.
    pub state: String,
    pub frequency: f64,
    pub stderr: f64,
}

pub fn cmd_mix(phi: u16, warmup: usize, samples: usize, seed: u64) -> Result<Vec<MixRow>, HarnessError> {
    let profile = mixing_profile(phi, warmup, samples, seed)?;
    Ok(profile
        .states()
        .map(|(s, frequency, stderr)| MixRow {
            state: match s {
                Step::Hold => "hold".into(),
                Step::At(j) => j.to_string(),
            },
            frequency,
            stderr,
        })
        .collect())
}

/// Structural analysis of the host and level LCLs plus the statistical
/// probe of the phase procedure.
#[derive(Debug, Clone, Serialize)]
pub struct EligibilityOutput {
    pub problem: String,
    pub delta: usize,
    pub c: Option<usize>,
    pub palette: Option<usize>,
    /// Influence number the transformer was built with.
    pub nu: usize,
    pub phi: u16,
    pub sigma0: u64,
    pub host: EligibilityReport,
    pub level: EligibilityReport,
    pub probe: ProbeReport,
}

impl EligibilityOutput {
    pub fn passed(&self) -> bool {
        self.host.core_coverage_ok
            && self.level.core_coverage_ok
            && self.level.influence_number.is_some()
            && self.probe.respectful()
            && self.probe.complete_when_zero()
    }
}

pub fn cmd_check_eligibility(
    spec: &ProblemSpec,
    trials: usize,
    max_n: usize,
    seed: u64,
) -> Result<EligibilityOutput, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::Config("trials must be positive".into()));
    }
    let problem = build(spec)?;
    let (host, level) = problem.analyze();
    let probe = problem.probe(trials, max_n, seed);
    Ok(EligibilityOutput {
        problem: spec.name.clone(),
        delta: spec.delta,
        c: spec.c,
        palette: spec.palette,
        nu: problem.inner.nu,
        phi: problem.inner.phi,
        sigma0: problem.inner.sigma0,
        host,
        level,
        probe,
    })
}
