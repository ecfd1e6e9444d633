use graph_core::{Configuration, Graph, Kind, Label};
use lcl_core::{is_content, potential, LclSpec, PotentialSpec};
use pps::{RngStream, StreamKey, Tag};
use serde::Serialize;

use crate::PhaseRunner;

/// Outcome of [`eligibility_probe`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    /// Content elements that stopped being content during the phase.
    pub lost_content: usize,
    /// Elements decided during the phase that are not content.
    pub uncontent_decisions: usize,
    /// Trials that started with zero potential.
    pub zero_potential_trials: usize,
    /// Of those, trials whose phase left the configuration complete.
    pub zero_potential_complete: usize,
    /// Trials with positive potential, over which β̂ is averaged.
    pub positive_trials: usize,
    /// Mean relative potential drop over one phase.
    pub beta_hat: f64,
    pub beta_stderr: f64,
    /// Lower end of the 99% normal confidence interval for β.
    pub beta_lower_99: f64,
}

impl ProbeReport {
    pub fn respectful(&self) -> bool {
        self.lost_content == 0 && self.uncontent_decisions == 0
    }

    pub fn complete_when_zero(&self) -> bool {
        self.zero_potential_complete == self.zero_potential_trials
    }
}

/// A random strong configuration: random values, then uncontent decided
/// elements are reset until none is left.
pub fn random_strong_config(lcl: &LclSpec, g: &Graph, density: f64, rng: &mut RngStream) -> Configuration {
    let mut c = Configuration::undecided_for(lcl.kind(), g);
    let domain: Vec<usize> = c.domain(g).collect();
    for &x in &domain {
        if rng.bernoulli(density) {
            c.set(x, Some(Label(1 + rng.below(lcl.alphabet()) as u16)));
        }
    }
    loop {
        let bad: Vec<usize> = domain.iter().copied().filter(|&x| c.get(x).is_some() && !is_content(lcl, g, &c, x).unwrap_or(false)).collect();
        if bad.is_empty() {
            return c;
        }
        let x = bad[rng.below(bad.len())];
        c.set(x, None);
    }
}

/// Removes undecided elements. With `isolate`, removes enough undecided
/// nodes that no two undecided nodes stay adjacent (node kind) or all
/// undecided edges (edge kind); otherwise removes each with probability
/// `p`. Removing undecided elements keeps a strong configuration strong.
fn delete_undecided(g: &Graph, c: &Configuration, isolate: bool, p: f64, rng: &mut RngStream) -> (Graph, Configuration) {
    let mut h = g.clone();
    match c.kind() {
        Kind::Node => {
            let mut values = c.values().to_vec();
            for v in g.nodes() {
                if values[v].is_some() || !h.is_alive(v) {
                    continue;
                }
                let clash = h.neighbors(v).iter().any(|&u| values[u].is_none());
                if (isolate && clash) || (!isolate && rng.bernoulli(p)) {
                    h.remove_node(v).expect("live node");
                    values[v] = None;
                }
            }
            (h, Configuration::node(values))
        }
        Kind::Edge => {
            let mut kept = Vec::new();
            for (idx, e) in g.edges().iter().enumerate() {
                let drop = c.get(idx).is_none() && (isolate || rng.bernoulli(p));
                if drop {
                    let (a, b) = e.endpoints();
                    h.remove_edge(a, b).expect("edge");
                } else {
                    kept.push(c.get(idx));
                }
            }
            (h, Configuration::edge(kept))
        }
    }
}

/// Statistical check of the respectful-decisions and progress properties
/// of a fault-free phase procedure.
///
/// Each trial draws a graph with `graphs`, a random strong configuration
/// on it, optionally deletes undecided elements, runs one synchronized
/// phase with `phase`, and compares before and after.
pub fn eligibility_probe(
    lcl: &LclSpec,
    pot: &PotentialSpec,
    trials: usize,
    seed: u64,
    mut graphs: impl FnMut(&mut RngStream) -> Graph,
    mut phase: impl FnMut(&mut PhaseRunner, &Graph, &Configuration) -> Configuration,
) -> ProbeReport {
    let mut rng = RngStream::derive(seed, StreamKey::Aux(0), Tag::Init);
    let mut runner = PhaseRunner::new(seed);
    let mut report = ProbeReport {
        trials,
        lost_content: 0,
        uncontent_decisions: 0,
        zero_potential_trials: 0,
        zero_potential_complete: 0,
        positive_trials: 0,
        beta_hat: 0.0,
        beta_stderr: 0.0,
        beta_lower_99: 0.0,
    };
    let mut drops = Vec::new();
    for t in 0..trials {
        let g0 = graphs(&mut rng);
        let density = [0.0, 0.2, 0.5, 0.8][t % 4];
        let c0 = random_strong_config(lcl, &g0, density, &mut rng);
        let (g, c) = match t % 3 {
            0 => (g0, c0),
            1 => delete_undecided(&g0, &c0, true, 0.0, &mut rng),
            _ => delete_undecided(&g0, &c0, false, 0.3, &mut rng),
        };
        let before = potential(pot, &g, &c).expect("potential kind");
        let next = phase(&mut runner, &g, &c);
        for x in c.domain(&g) {
            let was = c.get(x).is_some() && is_content(lcl, &g, &c, x).unwrap_or(false);
            let now = next.get(x).is_some() && is_content(lcl, &g, &next, x).unwrap_or(false);
            if was && !now {
                report.lost_content += 1;
            }
            if c.get(x).is_none() && next.get(x).is_some() && !now {
                report.uncontent_decisions += 1;
            }
        }
        if before == 0 {
            report.zero_potential_trials += 1;
            if next.is_complete(&g) {
                report.zero_potential_complete += 1;
            }
        } else {
            let after = potential(pot, &g, &next).expect("potential kind");
            drops.push((before as f64 - after as f64) / before as f64);
        }
    }
    report.positive_trials = drops.len();
    if !drops.is_empty() {
        let n = drops.len() as f64;
        let mean = drops.iter().sum::<f64>() / n;
        let var = if drops.len() > 1 { drops.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        report.beta_hat = mean;
        report.beta_stderr = (var / n).sqrt();
        report.beta_lower_99 = mean - 2.576 * report.beta_stderr;
    }
    report
}
