use std::path::PathBuf;
use std::process::ExitCode;

use algorithms::ProblemSpec;
use clap::{Args, Parser, Subcommand};
use engine::FaultKind;
use harness::{
    cmd_check_eligibility, cmd_mix, cmd_run, cmd_scale, emit, exit, exit_code, ExperimentConfig, Format, GraphSpec,
    HarnessError,
};

/// Self-stabilizing LCL experiments.
///
/// `run` and `scale` read an optional JSON config; every flag given on the
/// command line overrides the matching config field, and fields set by
/// neither take their built-in defaults.
#[derive(Parser)]
#[command(name = "lclstab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Trials of one (problem, graph, k) point; one record per trial.
    Run(ExperimentArgs),
    /// Sweep over k with per-k summaries and the log-k and linear fits.
    Scale {
        #[command(flatten)]
        args: ExperimentArgs,
        /// Exit with code 2 unless the log-k fit has the smaller residual.
        #[arg(long)]
        assert_fit: bool,
    },
    /// Empirical distribution of the phase counter after a warmup.
    Mix {
        #[arg(long, default_value_t = 4)]
        phi: u16,
        #[arg(long, default_value_t = 500)]
        warmup: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Cores, coverage, influence number and phase probes of a problem.
    CheckEligibility {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 4)]
        delta: usize,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        palette: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Largest host graph the probe draws.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    palette: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    /// Graph family: path, cycle, grid, star, complete or random.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Read the graph from an edge list instead.
    #[arg(long, conflicts_with = "graph")]
    edge_list: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    #[arg(long)]
    batches: Option<usize>,
    /// Comma-separated fault kinds, e.g. corrupt-all,rewire,remove-edge.
    #[arg(long, value_delimiter = ',', value_parser = parse_fault)]
    faults: Option<Vec<FaultKind>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_rounds: Option<u64>,
    #[arg(long)]
    confirm_window: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_fault(s: &str) -> Result<FaultKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown fault kind `{s}`"))
}

impl ExperimentArgs {
    fn config(self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        cfg.graph = self.graph_spec(cfg.graph.clone())?;
        macro_rules! set {
            ($($f:ident => $g:ident),*) => {$(if let Some(v) = self.$f { cfg.$g = v; })*};
        }
        set!(problem => problem, k => k, ks => ks, batches => batches, faults => fault_kinds, trials => trials,
             seed => seed, max_rounds => max_rounds, format => format);
        if self.c.is_some() {
            cfg.c = self.c;
        }
        if self.palette.is_some() {
            cfg.palette = self.palette;
        }
        if self.delta.is_some() {
            cfg.delta = self.delta;
        }
        if self.confirm_window.is_some() {
            cfg.confirm_window = self.confirm_window;
        }
        if self.output.is_some() {
            cfg.output = self.output;
        }
        Ok(cfg)
    }

    fn graph_spec(&self, current: GraphSpec) -> Result<GraphSpec, HarnessError> {
        if let Some(path) = &self.edge_list {
            return Ok(GraphSpec::EdgeList { path: path.clone() });
        }
        let (n0, p0) = match current {
            GraphSpec::Path { n } | GraphSpec::Cycle { n } | GraphSpec::Complete { n } => (n, 0.1),
            GraphSpec::Random { n, p } => (n, p),
            _ => (64, 0.1),
        };
        let n = self.n.unwrap_or(n0);
        let p = self.p.unwrap_or(p0);
        let family = match (&self.graph, &current) {
            (Some(f), _) => f.as_str(),
            (None, GraphSpec::Path { .. }) => "path",
            (None, GraphSpec::Cycle { .. }) => "cycle",
            (None, GraphSpec::Complete { .. }) => "complete",
            (None, GraphSpec::Random { .. }) => "random",
            (None, GraphSpec::Grid { rows, cols }) => {
                return Ok(GraphSpec::Grid { rows: self.rows.unwrap_or(*rows), cols: self.cols.unwrap_or(*cols) })
            }
            (None, GraphSpec::Star { leaves }) => return Ok(GraphSpec::Star { leaves: self.leaves.unwrap_or(*leaves) }),
            (None, GraphSpec::EdgeList { .. }) => return Ok(current),
        };
        Ok(match family {
            "path" => GraphSpec::Path { n },
            "cycle" => GraphSpec::Cycle { n },
            "complete" => GraphSpec::Complete { n },
            "random" => GraphSpec::Random { n, p },
            "grid" => GraphSpec::Grid { rows: self.rows.unwrap_or(8), cols: self.cols.unwrap_or(8) },
            "star" => GraphSpec::Star { leaves: self.leaves.unwrap_or(4) },
            other => return Err(HarnessError::Config(format!("unknown graph family `{other}`"))),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("lclstab: {e}");
            ExitCode::from(exit::CONFIG as u8)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32, HarnessError> {
    match cmd {
        Cmd::Run(args) => {
            let cfg = args.config()?;
            let report = cmd_run(&cfg)?;
            emit(&report.records, cfg.format, cfg.output.as_deref())?;
            eprintln!("{}", serde_json::to_string(&report.aggregate)?);
            Ok(exit_code(&report.records))
        }
        Cmd::Scale { args, assert_fit } => {
            let cfg = args.config()?;
            let report = cmd_scale(&cfg)?;
            emit(&report.rows, cfg.format, cfg.output.as_deref())?;
            eprintln!("{}", serde_json::json!({ "log_fit": report.log_fit, "linear_fit": report.linear_fit }));
            let code = exit_code(&report.records);
            if code == exit::OK && assert_fit && !report.log_fit_wins() {
                return Ok(exit::ASSERTION);
            }
            Ok(code)
        }
        Cmd::Mix { phi, warmup, samples, seed, output, format } => {
            let rows = cmd_mix(phi, warmup, samples, seed)?;
            emit(&rows, format, output.as_deref())?;
            Ok(exit::OK)
        }
        Cmd::CheckEligibility { problem, delta, c, palette, trials, max_n, seed, output } => {
            let spec = ProblemSpec { name: problem, delta, c, palette };
            let report = cmd_check_eligibility(&spec, trials, max_n, seed)?;
            let json = serde_json::to_string_pretty(&report)? + "\n";
            match output {
                Some(p) => std::fs::write(p, json)?,
                None => print!("{json}"),
            }
            Ok(if report.passed() { exit::OK } else { exit::ASSERTION })
        }
    }
}
