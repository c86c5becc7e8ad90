//! Unit electrical flow from label columns, and alternative-route extraction
//! by repeatedly peeling the widest path off that flow.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::labelling::LabelIndex;
use crate::query::{query_source, QueryError};
use crate::rng::seeded;

/// Residual flow at or below this is treated as dead.
pub const RESIDUAL_EPSILON: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("no positive-flow path from {0} to {1}")]
    NoPath(NodeId, NodeId),
    #[error("graph and index disagree on node count")]
    IndexMismatch,
}

/// Signed flow per undirected edge `(u, v)` with `u < v`; positive runs
/// from `u` to `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowAssignment {
    pub s: NodeId,
    pub t: NodeId,
    pub edges: Vec<(NodeId, NodeId, f64)>,
    pub potentials: Vec<f64>,
}

impl FlowAssignment {
    /// Flow from `a` to `b`; `None` if the edge does not exist.
    pub fn flow(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let (u, v, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        self.edges
            .binary_search_by(|e| (e.0, e.1).cmp(&(u, v)))
            .ok()
            .map(|i| sign * self.edges[i].2)
    }

    /// Net flow leaving each node.
    pub fn net_outflow(&self) -> Vec<f64> {
        let mut net = vec![0.0; self.potentials.len()];
        for &(u, v, f) in &self.edges {
            net[u] += f;
            net[v] -= f;
        }
        net
    }

    /// Potential drop `x[s] - x[t]`, equal to `r(s,t)`.
    pub fn potential_drop(&self) -> f64 {
        self.potentials[self.s] - self.potentials[self.t]
    }
}

/// Flow from two inverse columns: `x = col_s - col_t`.
pub fn flow_from_columns(g: &Graph, s: NodeId, t: NodeId, col_s: &[f64], col_t: &[f64]) -> FlowAssignment {
    let potentials: Vec<f64> = col_s.iter().zip(col_t).map(|(a, b)| a - b).collect();
    let edges = g.edges().map(|(u, v, c)| (u, v, (potentials[u] - potentials[v]) * c)).collect();
    FlowAssignment { s, t, edges, potentials }
}

pub fn electrical_flow(idx: &LabelIndex, g: &Graph, s: NodeId, t: NodeId) -> Result<FlowAssignment, FlowError> {
    if idx.node_count() != g.node_count() {
        return Err(FlowError::IndexMismatch);
    }
    let col_s = query_source(idx, s)?.column;
    let col_t = query_source(idx, t)?.column;
    if !idx.connected(s, t) {
        return Err(QueryError::DifferentComponents(s, t).into());
    }
    Ok(flow_from_columns(g, s, t, &col_s, &col_t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowPath {
    pub nodes: Vec<NodeId>,
    pub bottleneck: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Label {
    width: f64,
    hops: usize,
    node: NodeId,
}

impl Eq for Label {}

impl Ord for Label {
    // Max-heap order: wider first, then fewer hops, then smaller id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .total_cmp(&other.width)
            .then_with(|| other.hops.cmp(&self.hops))
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Widest path over directed residual arcs `out[u] = [(v, arc)]`.
fn widest_path(out: &[Vec<(NodeId, usize)>], residual: &[f64], s: NodeId, t: NodeId) -> Option<(Vec<usize>, f64)> {
    let n = out.len();
    let mut best: Vec<Option<(f64, usize, NodeId)>> = vec![None; n];
    let mut via = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[s] = Some((f64::INFINITY, 0, NodeId::MAX));
    heap.push(Label { width: f64::INFINITY, hops: 0, node: s });
    while let Some(Label { width, hops, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == t {
            break;
        }
        for &(v, arc) in &out[u] {
            if done[v] || residual[arc] <= RESIDUAL_EPSILON {
                continue;
            }
            let cand = (width.min(residual[arc]), hops + 1, u);
            let better = match best[v] {
                None => true,
                Some((w, h, p)) => match cand.0.total_cmp(&w) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => (cand.1, cand.2) < (h, p),
                },
            };
            if better {
                best[v] = Some(cand);
                via[v] = arc;
                heap.push(Label { width: cand.0, hops: cand.1, node: v });
            }
        }
    }
    if !done[t] || s == t {
        return None;
    }
    let mut arcs = Vec::new();
    let mut v = t;
    while v != s {
        arcs.push(via[v]);
        v = best[v].expect("reached node has a label").2;
    }
    arcs.reverse();
    Some((arcs, best[t].expect("t reached").0))
}

/// Extracts up to `k` widest paths, subtracting each bottleneck from the
/// residual flow. Stops early once no positive path remains.
pub fn alternative_paths(f: &FlowAssignment, g: &Graph, k: usize) -> Result<Vec<FlowPath>, FlowError> {
    let n = g.node_count();
    let mut out: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
    let mut arc_ends = Vec::new();
    let mut residual = Vec::new();
    for &(u, v, x) in &f.edges {
        let (a, b, amount) = if x > 0.0 { (u, v, x) } else { (v, u, -x) };
        if amount > RESIDUAL_EPSILON {
            out[a].push((b, residual.len()));
            arc_ends.push((a, b));
            residual.push(amount);
        }
    }
    let mut paths = Vec::new();
    for _ in 0..k {
        let Some((arcs, width)) = widest_path(&out, &residual, f.s, f.t) else { break };
        let mut nodes = vec![f.s];
        for &arc in &arcs {
            residual[arc] -= width;
            nodes.push(arc_ends[arc].1);
        }
        paths.push(FlowPath { nodes, bottleneck: width });
    }
    if paths.is_empty() {
        return Err(FlowError::NoPath(f.s, f.t));
    }
    Ok(paths)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64, NodeId);

impl Eq for Dist {}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over edge lengths; `None` if `t` is unreachable.
pub fn shortest_path_length(g: &Graph, s: NodeId, t: NodeId) -> Option<f64> {
    let mut dist = vec![f64::INFINITY; g.node_count()];
    let mut heap = BinaryHeap::from([Dist(0.0, s)]);
    dist[s] = 0.0;
    while let Some(Dist(d, u)) = heap.pop() {
        if u == t {
            return Some(d);
        }
        if d > dist[u] {
            continue;
        }
        for a in g.neighbors(u) {
            let nd = d + a.length;
            if nd < dist[a.node] {
                dist[a.node] = nd;
                heap.push(Dist(nd, a.node));
            }
        }
    }
    None
}

pub fn path_length(g: &Graph, nodes: &[NodeId]) -> f64 {
    nodes.windows(2).map(|w| g.length(w[0], w[1]).expect("path follows graph edges")).sum()
}

fn edge_set(nodes: &[NodeId]) -> HashSet<(NodeId, NodeId)> {
    nodes.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteMetrics {
    pub length_ratio: f64,
    /// `1 - mean pairwise Jaccard similarity`; 0 for a single path.
    pub diversity: f64,
    pub robustness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    pub removal_prob: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self { removal_prob: 0.001, trials: 1000, seed: crate::rng::DEFAULT_SEED }
    }
}

pub fn route_metrics(paths: &[Vec<NodeId>], g: &Graph, shortest_len: f64, params: MetricParams) -> RouteMetrics {
    assert!(!paths.is_empty(), "route metrics need at least one path");
    let length_ratio = paths.iter().map(|p| path_length(g, p) / shortest_len).sum::<f64>() / paths.len() as f64;

    let sets: Vec<_> = paths.iter().map(|p| edge_set(p)).collect();
    let mut similarity = 0.0;
    let mut pairs = 0usize;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let inter = sets[i].intersection(&sets[j]).count() as f64;
            let union = sets[i].union(&sets[j]).count() as f64;
            similarity += if union > 0.0 { inter / union } else { 1.0 };
            pairs += 1;
        }
    }
    let diversity = if pairs == 0 { 0.0 } else { 1.0 - similarity / pairs as f64 };

    let mut union: Vec<(NodeId, NodeId)> = sets.iter().flatten().copied().collect();
    union.sort_unstable();
    union.dedup();
    let (s, t) = (paths[0][0], *paths[0].last().expect("nonempty path"));
    let survived = (0..params.trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = seeded(params.seed.wrapping_add(i as u64));
            let kept: Vec<_> = union.iter().filter(|_| !rng.gen_bool(params.removal_prob)).copied().collect();
            connects(&kept, s, t)
        })
        .count();
    let robustness = if params.trials == 0 { 0.0 } else { survived as f64 / params.trials as f64 };
    RouteMetrics { length_ratio, diversity, robustness }
}

fn connects(edges: &[(NodeId, NodeId)], s: NodeId, t: NodeId) -> bool {
    if s == t {
        return true;
    }
    let mut reached = HashSet::from([s]);
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let other = if a == u { b } else if b == u { a } else { continue };
            if reached.insert(other) {
                if other == t {
                    return true;
                }
                stack.push(other);
            }
        }
    }
    false
}
