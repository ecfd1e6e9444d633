use std::path::{Path, PathBuf};

use algorithms::ProblemSpec;
use engine::FaultKind;
use graph_core::{generate, read_edge_list, Graph};
use pps::{RngStream, StreamKey, Tag};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::HarnessError;

/// Host graph of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Path { n: usize },
    Cycle { n: usize },
    Grid { rows: usize, cols: usize },
    Star { leaves: usize },
    Complete { n: usize },
    /// Degree-bounded G(n, p), redrawn for every trial.
    Random { n: usize, p: f64 },
    EdgeList { path: PathBuf },
}

impl GraphSpec {
    /// Largest degree the family can produce, used when Δ is not given.
    fn natural_delta(&self) -> Option<usize> {
        match *self {
            GraphSpec::Path { n } => Some(usize::from(n > 1) + usize::from(n > 2)),
            GraphSpec::Cycle { n } => Some(if n >= 3 { 2 } else { usize::from(n > 1) }),
            GraphSpec::Grid { rows, cols } => Some(2.min(rows.saturating_sub(1)) + 2.min(cols.saturating_sub(1))),
            GraphSpec::Star { leaves } => Some(leaves),
            GraphSpec::Complete { n } => Some(n.saturating_sub(1)),
            GraphSpec::Random { .. } | GraphSpec::EdgeList { .. } => None,
        }
    }

    /// Whether every trial sees the same graph.
    pub fn is_fixed(&self) -> bool {
        !matches!(self, GraphSpec::Random { .. })
    }

    /// Builds the graph of `trial`.
    pub fn build(&self, delta: usize, seed: u64, trial: usize) -> Result<Graph, HarnessError> {
        let g = match self {
            GraphSpec::Path { n } => generate::path(*n, delta),
            GraphSpec::Cycle { n } => generate::cycle(*n, delta),
            GraphSpec::Grid { rows, cols } => generate::grid(*rows, *cols, delta),
            GraphSpec::Star { leaves } => generate::star(*leaves, delta),
            GraphSpec::Complete { n } => generate::complete(*n, delta),
            GraphSpec::Random { n, p } => {
                let mut rng = RngStream::derive(seed, StreamKey::Aux(trial as u64), Tag::Init);
                generate::random_bounded(*n, *p, delta, &mut rng)
            }
            GraphSpec::EdgeList { path } => read_edge_list(path, delta),
        };
        g.map_err(|e| HarnessError::Config(format!("graph: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One experiment, read from a JSON document. Missing fields take the
/// defaults of [`ExperimentConfig::default`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    /// Number of colors of maximal and incremental colorings.
    pub c: Option<usize>,
    pub palette: Option<usize>,
    pub graph: GraphSpec,
    /// Degree bound; defaults to the largest degree of the graph family.
    pub delta: Option<usize>,
    /// Manipulated nodes for `run`.
    pub k: usize,
    /// Sweep points for `scale`.
    pub ks: Vec<usize>,
    pub batches: usize,
    pub fault_kinds: Vec<FaultKind>,
    pub trials: usize,
    pub seed: u64,
    pub max_rounds: u64,
    /// Defaults to the algorithm's own window, 2φ+2.
    pub confirm_window: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problem: "mis".into(),
            c: None,
            palette: None,
            graph: GraphSpec::Cycle { n: 64 },
            delta: None,
            k: 1,
            ks: vec![1, 4, 16, 64, 256],
            batches: 1,
            fault_kinds: vec![FaultKind::CorruptAll],
            trials: 10,
            seed: 0,
            max_rounds: 100_000,
            confirm_window: None,
            output: None,
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn delta(&self) -> Result<usize, HarnessError> {
        match (self.delta, self.graph.natural_delta()) {
            (Some(d), _) => Ok(d),
            (None, Some(d)) => Ok(d.max(1)),
            (None, None) => Err(HarnessError::Config("delta is required for random and edge-list graphs".into())),
        }
    }

    pub fn problem_spec(&self) -> Result<ProblemSpec, HarnessError> {
        Ok(ProblemSpec { name: self.problem.clone(), delta: self.delta()?, c: self.c, palette: self.palette })
    }

    /// Hex SHA-256 of the canonical JSON form, ignoring where output goes.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks everything that does not need the algorithm. `ks` lists the
    /// fault counts the command will use.
    pub fn validate(&self, ks: &[usize]) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.into()));
        if self.trials == 0 {
            return bad("trials must be positive");
        }
        if self.max_rounds == 0 {
            return bad("max_rounds must be positive");
        }
        if self.batches == 0 {
            return bad("batches must be positive");
        }
        if self.confirm_window == Some(0) {
            return bad("confirm_window must be positive");
        }
        if self.delta()? == 0 {
            return bad("delta must be positive");
        }
        if let GraphSpec::Random { p, .. } = self.graph {
            if !(0.0..=1.0).contains(&p) {
                return bad("p must lie in [0, 1]");
            }
        }
        let n = self.graph.build(self.delta()?, self.seed, 0)?.node_count();
        if n == 0 {
            return bad("graph has no nodes");
        }
        for &k in ks {
            if k > n {
                return Err(HarnessError::Config(format!("k = {k} exceeds n = {n}")));
            }
            if k > 0 && self.batches > k {
                return Err(HarnessError::Config(format!("{} batches need k ≥ {}", self.batches, self.batches)));
            }
        }
        Ok(())
    }
}
