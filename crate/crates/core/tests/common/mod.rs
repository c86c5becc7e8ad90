#![allow(dead_code)]

use std::collections::VecDeque;

use rand::Rng;
use resdist_core::generators;
use resdist_core::oracle::DenseMatrix;
use resdist_core::rng::seeded;
use resdist_core::{Graph, LabelIndex, NodeId};

/// Connected random graph with `n` in `[lo, hi]`: Erdős–Rényi on even
/// draws, grid-with-chords on odd ones; weighted when `seed % 4 >= 2`.
pub fn sweep_graph(seed: u64, lo: usize, hi: usize) -> Graph {
    let mut rng = seeded(seed ^ 0x5eed);
    let n = rng.gen_range(lo..=hi);
    let weighted = seed % 4 >= 2;
    if seed.is_multiple_of(2) {
        let avg_degree = rng.gen_range(2.0..5.0);
        let p = (avg_degree / (n.max(2) - 1) as f64).min(1.0);
        generators::connected_erdos_renyi(n, p, weighted, seed)
    } else {
        let rows = ((n as f64).sqrt() as usize).max(2);
        let cols = (n / rows).max(2);
        generators::grid_with_chords(rows, cols, 0.3, weighted, seed)
    }
}

/// Unweighted hop distances from `s`.
pub fn bfs(g: &Graph, s: NodeId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for a in g.neighbors(u) {
            if dist[a.node] == usize::MAX {
                dist[a.node] = dist[u] + 1;
                queue.push_back(a.node);
            }
        }
    }
    dist
}

/// `Σ_{v non-root} S[:,v] S[:,v]^T / S[v,v]` assembled from stored labels.
pub fn cholesky_sum(idx: &LabelIndex) -> DenseMatrix {
    let n = idx.node_count();
    let h = idx.hierarchy();
    let mut m = DenseMatrix::zeros(n, n);
    for v in 0..n {
        let label = idx.label(v);
        if label.is_empty() {
            continue;
        }
        let members = h.subtree(v);
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                m[(a, b)] += label[i] * label[j] / label[0];
            }
        }
    }
    m
}

pub fn pinv_resistance(pinv: &DenseMatrix, s: NodeId, t: NodeId) -> f64 {
    pinv[(s, s)] + pinv[(t, t)] - 2.0 * pinv[(s, t)]
}
