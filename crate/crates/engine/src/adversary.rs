use std::collections::BTreeSet;

use graph_core::{Graph, NodeId};
use pps::{RngStream, StreamKey, Tag};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::{CorruptMask, EngineError};

/// One adversarial manipulation, applied after `round` rounds have run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryAction {
    pub round: u64,
    pub kind: ActionKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionKind {
    CorruptRegisters { nodes: Vec<NodeId>, mask: CorruptMask },
    /// New port `p` of `node` is old port `perm[p]`.
    RewirePorts { node: NodeId, perm: Vec<usize> },
    /// A node with arbitrary registers joins, linked to `neighbors`.
    AddNode { neighbors: Vec<NodeId> },
    RemoveNode { node: NodeId },
    AddEdge { u: NodeId, v: NodeId },
    RemoveEdge { u: NodeId, v: NodeId },
}

/// Fault families a random schedule draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultKind {
    CorruptOutput,
    CorruptAll,
    Rewire,
    AddNode,
    RemoveNode,
    AddEdge,
    RemoveEdge,
}

impl FaultKind {
    pub const ALL: [FaultKind; 7] = [
        FaultKind::CorruptOutput,
        FaultKind::CorruptAll,
        FaultKind::Rewire,
        FaultKind::AddNode,
        FaultKind::RemoveNode,
        FaultKind::AddEdge,
        FaultKind::RemoveEdge,
    ];
}

/// Nodes an action manipulates, evaluated on the graph before the action.
/// A new node's handle is the next slot.
pub fn manipulated_by(g: &Graph, kind: &ActionKind) -> Vec<NodeId> {
    match kind {
        ActionKind::CorruptRegisters { nodes, .. } => nodes.clone(),
        ActionKind::RewirePorts { node, .. } => vec![*node],
        ActionKind::AddNode { neighbors } => {
            let mut k = neighbors.clone();
            k.push(g.slots());
            k
        }
        ActionKind::RemoveNode { node } => g.neighbors(*node).to_vec(),
        ActionKind::AddEdge { u, v } | ActionKind::RemoveEdge { u, v } => vec![*u, *v],
    }
}

/// Oblivious schedule manipulating exactly `k` distinct nodes, spread over
/// `batches` consecutive rounds from `start`. Fault types are drawn from
/// `kinds`; a draw that cannot be realised without overshooting `k` falls
/// back to register corruption of a single node.
pub fn random_fault_schedule(
    g: &Graph,
    k: usize,
    batches: usize,
    kinds: &[FaultKind],
    start: u64,
    seed: u64,
) -> Result<Vec<AdversaryAction>, EngineError> {
    if k == 0 || batches == 0 {
        return Err(EngineError::InvalidSchedule("k and batches must be positive".into()));
    }
    if k > g.node_count() {
        return Err(EngineError::KTooLarge { k, n: g.node_count() });
    }
    if batches > k {
        return Err(EngineError::InvalidSchedule(format!("{batches} batches cannot each manipulate one of {k} nodes")));
    }
    let kinds = if kinds.is_empty() { &[FaultKind::CorruptAll][..] } else { kinds };
    let fallback = if kinds.contains(&FaultKind::CorruptOutput) && !kinds.contains(&FaultKind::CorruptAll) {
        CorruptMask::OUT
    } else {
        CorruptMask::ALL
    };
    let mut rng = RngStream::derive(seed, StreamKey::Aux(0), Tag::Adversary);
    let mut g = g.clone();
    let mut touched = BTreeSet::new();
    let mut actions = Vec::new();
    for b in 0..batches {
        let round = start + b as u64;
        let mut quota = k / batches + usize::from(b < k % batches);
        let mut corrupt: Vec<(NodeId, CorruptMask)> = Vec::new();
        while quota > 0 {
            let kind = *kinds.choose(&mut rng).expect("nonempty");
            let remaining = k - touched.len();
            let action = (0..64).find_map(|_| propose(&g, kind, quota, remaining, &touched, &mut rng));
            let action = match action {
                Some(ActionKind::CorruptRegisters { nodes, mask }) => {
                    corrupt.push((nodes[0], mask));
                    touched.insert(nodes[0]);
                    quota -= 1;
                    continue;
                }
                Some(a) => a,
                None => {
                    let free: Vec<NodeId> =
                        g.nodes().filter(|v| !touched.contains(v) && !corrupt.iter().any(|c| c.0 == *v)).collect();
                    let v = *free.choose(&mut rng).expect("k ≤ n leaves a free node");
                    corrupt.push((v, fallback));
                    touched.insert(v);
                    quota -= 1;
                    continue;
                }
            };
            let k_new = manipulated_by(&g, &action);
            quota -= k_new.len();
            touched.extend(k_new);
            if let ActionKind::RemoveNode { node } = &action {
                touched.remove(node);
            }
            apply_to_graph(&mut g, &action)?;
            actions.push(AdversaryAction { round, kind: action });
        }
        for mask in [CorruptMask::OUT, CorruptMask::ALL] {
            let nodes: Vec<NodeId> = corrupt.iter().filter(|c| c.1 == mask).map(|c| c.0).collect();
            if !nodes.is_empty() {
                actions.push(AdversaryAction { round, kind: ActionKind::CorruptRegisters { nodes, mask } });
            }
        }
    }
    Ok(actions)
}

fn propose(
    g: &Graph,
    kind: FaultKind,
    quota: usize,
    remaining: usize,
    touched: &BTreeSet<NodeId>,
    rng: &mut RngStream,
) -> Option<ActionKind> {
    let free: Vec<NodeId> = g.nodes().filter(|v| !touched.contains(v)).collect();
    let pick = |rng: &mut RngStream| free.choose(rng).copied();
    let delta = g.delta();
    match kind {
        FaultKind::CorruptOutput => Some(ActionKind::CorruptRegisters { nodes: vec![pick(rng)?], mask: CorruptMask::OUT }),
        FaultKind::CorruptAll => Some(ActionKind::CorruptRegisters { nodes: vec![pick(rng)?], mask: CorruptMask::ALL }),
        FaultKind::Rewire => {
            let v = pick(rng)?;
            if g.degree(v) < 2 {
                return None;
            }
            let mut perm: Vec<usize> = (0..g.degree(v)).collect();
            while perm.iter().enumerate().all(|(i, &p)| i == p) {
                perm.shuffle(rng);
            }
            Some(ActionKind::RewirePorts { node: v, perm })
        }
        FaultKind::AddNode => {
            if quota < 2 {
                return None;
            }
            let mut cands: Vec<NodeId> = free.iter().copied().filter(|&u| g.degree(u) < delta).collect();
            cands.shuffle(rng);
            let m = 1 + rng.below((quota - 1).min(delta).min(cands.len()).max(1));
            if cands.len() < m {
                return None;
            }
            Some(ActionKind::AddNode { neighbors: cands[..m].to_vec() })
        }
        FaultKind::RemoveNode => {
            let v = *g.nodes().collect::<Vec<_>>().choose(rng)?;
            let nbrs = g.neighbors(v);
            // The removed node leaves the pool without counting toward k.
            if free.len() <= remaining
                || touched.contains(&v)
                || nbrs.is_empty()
                || nbrs.len() > quota
                || nbrs.iter().any(|u| touched.contains(u))
            {
                return None;
            }
            Some(ActionKind::RemoveNode { node: v })
        }
        FaultKind::AddEdge => {
            if quota < 2 {
                return None;
            }
            let (u, v) = (pick(rng)?, pick(rng)?);
            if u == v || g.has_edge(u, v) || g.degree(u) >= delta || g.degree(v) >= delta {
                return None;
            }
            Some(ActionKind::AddEdge { u, v })
        }
        FaultKind::RemoveEdge => {
            if quota < 2 {
                return None;
            }
            let u = pick(rng)?;
            let v = *g.neighbors(u).choose(rng)?;
            if touched.contains(&v) {
                return None;
            }
            Some(ActionKind::RemoveEdge { u, v })
        }
    }
}

/// The topology part of an action, applied to a bare graph.
pub fn apply_to_graph(g: &mut Graph, kind: &ActionKind) -> Result<(), EngineError> {
    match kind {
        ActionKind::CorruptRegisters { .. } => {}
        ActionKind::RewirePorts { node, perm } => g.permute_ports(*node, perm)?,
        ActionKind::AddNode { neighbors } => {
            let v = g.add_node();
            for &u in neighbors {
                g.add_edge(v, u)?;
            }
        }
        ActionKind::RemoveNode { node } => g.remove_node(*node)?,
        ActionKind::AddEdge { u, v } => g.add_edge(*u, *v)?,
        ActionKind::RemoveEdge { u, v } => g.remove_edge(*u, *v)?,
    }
    Ok(())
}
