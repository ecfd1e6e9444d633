use std::collections::BTreeSet;

use algorithms::{build, Visitor};
use engine::{
    apply_to_graph, manipulated_by, random_fault_schedule, EngineError, InvariantMonitor, LocalityMonitor, Network, Protocol,
};
use graph_core::Graph;
use lcl_core::{is_legal, potential};
use pps::{derive_seed, StreamKey, Tag};
use rayon::prelude::*;
use serde::Serialize;

use crate::stats::{least_squares, mean, median, stderr, Fit};
use crate::{ExperimentConfig, HarnessError};

/// Outcome of one trial at one fault count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub config_hash: String,
    pub seed: u64,
    pub problem: String,
    pub n: usize,
    pub k: usize,
    pub trial: usize,
    /// Rounds the fault-free run from all-⊥ took to become legal.
    pub init_rounds: Option<u64>,
    /// Round of the first adversary batch.
    pub t_a: Option<u64>,
    /// Round right after the last batch was applied.
    pub t_b: Option<u64>,
    pub stabilized_at: Option<u64>,
    /// Stabilization rounds counted from `t_b`.
    pub t: Option<u64>,
    pub timeout: bool,
    pub legal: bool,
    /// Undecided elements of the simulated level at `t_b + strong_offset`.
    pub undecided_at_ts: Option<usize>,
    pub potential_at_ts: Option<u64>,
    pub locality_radius: usize,
    pub locality_watched: usize,
    pub locality_violations: usize,
    pub strong_violations: u64,
    pub potential_increases: u64,
    pub write_violations: usize,
}

impl TrialRecord {
    /// A completed trial that breaks a checked property.
    pub fn failed(&self) -> bool {
        !self.timeout
            && (!self.legal
                || self.locality_violations > 0
                || self.strong_violations > 0
                || self.potential_increases > 0
                || self.write_violations > 0)
    }
}

/// Summary of `T` over a set of trials. Timeouts are counted, not averaged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub trials: usize,
    pub completed: usize,
    pub timeouts: usize,
    pub failures: usize,
    pub mean_t: Option<f64>,
    pub median_t: Option<f64>,
    pub stderr_t: Option<f64>,
}

impl Aggregate {
    pub fn of<'a>(records: impl IntoIterator<Item = &'a TrialRecord>) -> Self {
        let records: Vec<&TrialRecord> = records.into_iter().collect();
        let ts: Vec<f64> = records.iter().filter_map(|r| r.t).map(|t| t as f64).collect();
        Aggregate {
            trials: records.len(),
            completed: ts.len(),
            timeouts: records.iter().filter(|r| r.timeout).count(),
            failures: records.iter().filter(|r| r.failed()).count(),
            mean_t: mean(&ts),
            median_t: median(&ts),
            stderr_t: stderr(&ts),
        }
    }
}

/// Output of `run`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config_hash: String,
    pub seed: u64,
    pub records: Vec<TrialRecord>,
    pub aggregate: Aggregate,
}

/// One row of a `scale` table. The fit columns repeat on every row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleRow {
    pub config_hash: String,
    pub seed: u64,
    pub problem: String,
    pub k: usize,
    pub trials: usize,
    pub completed: usize,
    pub timeouts: usize,
    pub failures: usize,
    pub mean_t: Option<f64>,
    pub median_t: Option<f64>,
    pub stderr_t: Option<f64>,
    pub log_slope: Option<f64>,
    pub log_intercept: Option<f64>,
    pub log_rss: Option<f64>,
    pub linear_slope: Option<f64>,
    pub linear_intercept: Option<f64>,
    pub linear_rss: Option<f64>,
}

/// Output of `scale`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleReport {
    pub rows: Vec<ScaleRow>,
    /// Mean `T` against log₂ k.
    pub log_fit: Option<Fit>,
    /// Mean `T` against k.
    pub linear_fit: Option<Fit>,
    pub records: Vec<TrialRecord>,
}

impl ScaleReport {
    pub fn log_fit_wins(&self) -> bool {
        matches!((self.log_fit, self.linear_fit), (Some(l), Some(f)) if l.rss < f.rss)
    }

    pub fn mean_at(&self, k: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.k == k).and_then(|r| r.mean_t)
    }
}

pub fn cmd_run(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    cfg.validate(&[cfg.k])?;
    let records = run_trials(cfg, &[cfg.k])?;
    let aggregate = Aggregate::of(&records);
    Ok(RunReport { config_hash: cfg.hash(), seed: cfg.seed, records, aggregate })
}

pub fn cmd_scale(cfg: &ExperimentConfig) -> Result<ScaleReport, HarnessError> {
    let ks: Vec<usize> = cfg.ks.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if ks.len() < 3 {
        return Err(HarnessError::Config("scale needs at least 3 distinct k values".into()));
    }
    if ks[0] == 0 {
        return Err(HarnessError::Config("scale needs k ≥ 1".into()));
    }
    cfg.validate(&ks)?;
    let records = run_trials(cfg, &ks)?;
    let hash = cfg.hash();
    let aggs: Vec<Aggregate> = ks.iter().map(|&k| Aggregate::of(records.iter().filter(|r| r.k == k))).collect();
    let points: Vec<(f64, f64)> =
        ks.iter().zip(&aggs).filter_map(|(&k, a)| a.mean_t.map(|m| (k as f64, m))).collect();
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let logs: Vec<f64> = xs.iter().map(|x| x.log2()).collect();
    let log_fit = least_squares(&logs, &ys);
    let linear_fit = least_squares(&xs, &ys);
    let rows = ks
        .iter()
        .zip(aggs)
        .map(|(&k, a)| ScaleRow {
            config_hash: hash.clone(),
            seed: cfg.seed,
            problem: cfg.problem.clone(),
            k,
            trials: a.trials,
            completed: a.completed,
            timeouts: a.timeouts,
            failures: a.failures,
            mean_t: a.mean_t,
            median_t: a.median_t,
            stderr_t: a.stderr_t,
            log_slope: log_fit.map(|f| f.slope),
            log_intercept: log_fit.map(|f| f.intercept),
            log_rss: log_fit.map(|f| f.rss),
            linear_slope: linear_fit.map(|f| f.slope),
            linear_intercept: linear_fit.map(|f| f.intercept),
            linear_rss: linear_fit.map(|f| f.rss),
        })
        .collect();
    Ok(ScaleReport { rows, log_fit, linear_fit, records })
}

/// Runs every trial at every fault count in `ks`. Records come out ordered
/// by k, then trial.
pub fn run_trials(cfg: &ExperimentConfig, ks: &[usize]) -> Result<Vec<TrialRecord>, HarnessError> {
    let problem = build(&cfg.problem_spec()?)?;
    let delta = cfg.delta()?;
    let hash = cfg.hash();
    let fixed = if cfg.graph.is_fixed() { Some(cfg.graph.build(delta, cfg.seed, 0)?) } else { None };
    let per_trial: Vec<Vec<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let graph = match &fixed {
                Some(g) => g.clone(),
                None => cfg.graph.build(delta, cfg.seed, trial)?,
            };
            problem.algorithm.clone().visit(Trial { cfg, hash: &hash, graph, trial, ks })
        })
        .collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(ks.len() * cfg.trials);
    for i in 0..ks.len() {
        out.extend(per_trial.iter().map(|rs| rs[i].clone()));
    }
    Ok(out)
}

struct Trial<'a> {
    cfg: &'a ExperimentConfig,
    hash: &'a str,
    graph: Graph,
    trial: usize,
    ks: &'a [usize],
}

impl Trial<'_> {
    fn record(&self, n: usize, k: usize) -> TrialRecord {
        TrialRecord {
            config_hash: self.hash.to_string(),
            seed: self.cfg.seed,
            problem: self.cfg.problem.clone(),
            n,
            k,
            trial: self.trial,
            init_rounds: None,
            t_a: None,
            t_b: None,
            stabilized_at: None,
            t: None,
            timeout: false,
            legal: false,
            undecided_at_ts: None,
            potential_at_ts: None,
            locality_radius: 0,
            locality_watched: 0,
            locality_violations: 0,
            strong_violations: 0,
            potential_increases: 0,
            write_violations: 0,
        }
    }
}

impl Visitor for Trial<'_> {
    type Output = Result<Vec<TrialRecord>, HarnessError>;

    fn visit<P: Protocol + Clone + 'static>(self, proto: P) -> Self::Output {
        let cfg = self.cfg;
        let params = proto.params();
        let window = cfg.confirm_window.unwrap_or(params.confirm_window() as u64);
        let n = self.graph.node_count();
        let net_seed = derive_seed(cfg.seed, StreamKey::Aux(self.trial as u64), Tag::Phase);
        let mut base = Network::new(proto, self.graph.clone(), net_seed);
        let init = match base.run_until_stable(cfg.max_rounds, window, |_| {}) {
            Ok(s) => s,
            Err(EngineError::Timeout { .. }) => {
                return Ok(self.ks.iter().map(|&k| TrialRecord { timeout: true, ..self.record(n, k) }).collect());
            }
            Err(e) => return Err(e.into()),
        };
        let t0 = base.round();
        let mut out = Vec::with_capacity(self.ks.len());
        for &k in self.ks {
            let mut rec = TrialRecord {
                init_rounds: Some(init.round),
                locality_radius: params.locality_radius,
                ..self.record(n, k)
            };
            let mut net = base.clone();
            let write_base = net.write_violations().len();
            let baseline = net.host_config();
            let g0 = net.graph().clone();
            let mut manipulated = BTreeSet::new();
            if k > 0 {
                let fault_seed = derive_seed(cfg.seed, StreamKey::Clone(self.trial, k), Tag::Adversary);
                let schedule = random_fault_schedule(&g0, k, cfg.batches, &cfg.fault_kinds, t0, fault_seed)?;
                let mut g = g0.clone();
                for a in &schedule {
                    manipulated.extend(manipulated_by(&g, &a.kind));
                    apply_to_graph(&mut g, &a.kind)?;
                }
                net.schedule(schedule)?;
            }
            // New nodes have no distance on the old graph; their neighbours
            // are manipulated too.
            let sources: Vec<usize> = manipulated.iter().copied().filter(|&v| v < g0.slots()).collect();
            let mut locality = LocalityMonitor::new(&g0, &baseline, &sources, params.locality_radius);
            rec.locality_watched = locality.watched();
            rec.t_a = (k > 0).then_some(t0);
            let observe_loc = |net: &mut Network<P>, loc: &mut LocalityMonitor| {
                let c = net.host_config();
                loc.observe(net.round(), net.graph(), &c);
            };
            observe_loc(&mut net, &mut locality);
            let mut stepped = Ok(());
            while net.has_pending_actions() && stepped.is_ok() {
                stepped = net.run_round();
                observe_loc(&mut net, &mut locality);
            }
            stepped?;
            let tb = net.round();
            rec.t_b = Some(tb);
            let ts = tb + params.strong_offset as u64;
            let mut inv = InvariantMonitor::new(ts, net.protocol().view_lcl().clone(), net.protocol().potential());
            let mut at_ts = None;
            let mut observe = |net: &mut Network<P>| {
                if net.round() > tb {
                    observe_loc(net, &mut locality);
                }
                let round = net.round();
                if round < ts {
                    return;
                }
                let c = net.view_config();
                let pot = net.protocol().potential();
                let g = net.view_graph();
                inv.observe(round, g, &c);
                if round == ts {
                    at_ts = Some((c.undecided(g).len(), potential(&pot, g, &c).expect("potential kind matches")));
                }
            };
            let result = net.run_until_stable(cfg.max_rounds, window, &mut observe);
            match result {
                Ok(stable) => {
                    while net.round() < ts {
                        net.run_round()?;
                        observe(&mut net);
                    }
                    rec.stabilized_at = Some(stable.round);
                    rec.t = Some(stable.round - tb);
                    rec.legal = is_legal(net.protocol().lcl(), net.graph(), &stable.config);
                }
                Err(EngineError::Timeout { .. }) => rec.timeout = true,
                Err(e) => return Err(e.into()),
            }
            if let Some((u, p)) = at_ts {
                rec.undecided_at_ts = Some(u);
                rec.potential_at_ts = Some(p);
            }
            rec.locality_violations = locality.violations.len();
            rec.strong_violations = inv.report.strong_violations;
            rec.potential_increases = inv.report.potential_increases;
            rec.write_violations = net.write_violations().len() - write_base;
            out.push(rec);
        }
        Ok(out)
    }
}
