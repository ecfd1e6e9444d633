//! Named graph families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::{Graph, GraphError};

pub fn path(n: usize, delta: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::with_nodes(n, &edges, delta)
}

/// C_n for n ≥ 3; smaller n degrade to a path.
pub fn cycle(n: usize, delta: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return path(n, delta);
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::with_nodes(n, &edges, delta)
}

/// a × b grid, node `(r, c)` at handle `r * b + c`.
pub fn grid(a: usize, b: usize, delta: usize) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for r in 0..a {
        for c in 0..b {
            let v = r * b + c;
            if c + 1 < b {
                edges.push((v, v + 1));
            }
            if r + 1 < a {
                edges.push((v, v + b));
            }
        }
    }
    Graph::with_nodes(a * b, &edges, delta)
}

/// K_{1,k} with centre 0.
pub fn star(k: usize, delta: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Graph::with_nodes(k + 1, &edges, delta)
}

pub fn complete(n: usize, delta: usize) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::with_nodes(n, &edges, delta)
}

/// G(n, p) restricted to degree ≤ Δ: candidate pairs are visited in random
/// order and each is kept with probability `p` unless it would push an
/// endpoint above Δ, in which case it is rejected.
pub fn random_bounded<R: Rng + ?Sized>(n: usize, p: f64, delta: usize, rng: &mut R) -> Result<Graph, GraphError> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    pairs.shuffle(rng);
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if rng.gen_bool(p.clamp(0.0, 1.0)) && deg[u] < delta && deg[v] < delta {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::with_nodes(n, &edges, delta)
}
