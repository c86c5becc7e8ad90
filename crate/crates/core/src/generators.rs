//! Deterministic graph generators for tests, benchmarks and smoke runs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, NodeId};
use crate::rng::seeded;

/// Edges of the 9-node worked example on nodes v1..v9 (ids 0..8).
///
/// There is no v4-v5 edge: with it, r(v2,v4) would be 32/23 instead of the
/// 1.61 the other reference values for this graph agree with.
pub const NINE_NODE_EDGES: [(NodeId, NodeId); 12] = [
    (1, 2),
    (2, 3),
    (2, 9),
    (3, 7),
    (3, 9),
    (4, 6),
    (4, 8),
    (5, 6),
    (5, 9),
    (7, 8),
    (7, 9),
    (8, 9),
];

/// The 9-node worked example with unit conductances; node `vk` has id `k-1`.
pub fn nine_node_example() -> Graph {
    let edges: Vec<_> = NINE_NODE_EDGES.iter().map(|&(a, b)| (a - 1, b - 1, 1.0)).collect();
    Graph::from_edges(9, &edges).expect("static edge list is valid")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
    Graph::from_edges(n, &edges).expect("path")
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    Graph::from_edges(n, &edges).expect("cycle")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b, 1.0));
        }
    }
    Graph::from_edges(n, &edges).expect("complete")
}

/// `rows x cols` grid; node `(r, c)` has id `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    Graph::from_edges(rows * cols, &grid_edges(rows, cols)).expect("grid")
}

fn grid_edges(rows: usize, cols: usize) -> Vec<(NodeId, NodeId, f64)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1, 1.0));
            }
            if r + 1 < rows {
                edges.push((v, v + cols, 1.0));
            }
        }
    }
    edges
}

fn conductance<R: Rng>(rng: &mut R, weighted: bool) -> f64 {
    if weighted {
        rng.gen_range(0.25..4.0)
    } else {
        1.0
    }
}

/// Connected Erdős–Rényi-style graph: a random spanning tree plus each
/// remaining pair with probability `p`.
pub fn connected_erdos_renyi(n: usize, p: f64, weighted: bool, seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let mut perm: Vec<NodeId> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for i in 1..n {
        let a = perm[i];
        let b = perm[rng.gen_range(0..i)];
        present.insert((a.min(b), a.max(b)));
        edges.push((a, b, conductance(&mut rng, weighted)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !present.contains(&(a, b)) && rng.gen_bool(p) {
                edges.push((a, b, conductance(&mut rng, weighted)));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are valid")
}

/// Grid with random diagonal chords; connected by construction.
pub fn grid_with_chords(rows: usize, cols: usize, chord_prob: f64, weighted: bool, seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let mut edges: Vec<_> = grid_edges(rows, cols)
        .into_iter()
        .map(|(a, b, _)| (a, b, conductance(&mut rng, weighted)))
        .collect();
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            if rng.gen_bool(chord_prob) {
                let v = r * cols + c;
                let (a, b) = if rng.gen_bool(0.5) { (v, v + cols + 1) } else { (v + 1, v + cols) };
                edges.push((a, b, conductance(&mut rng, weighted)));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges).expect("generated edges are valid")
}

/// Planar road-like graph: a grid spanning tree (random), plus each other
/// grid edge kept with probability `keep`. Always connected and planar.
pub fn planar_road_like(rows: usize, cols: usize, keep: f64, weighted: bool, seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let n = rows * cols;
    let mut all = grid_edges(rows, cols);
    all.shuffle(&mut rng);
    let mut dsu: Vec<usize> = (0..n).collect();
    fn find(d: &mut [usize], mut x: usize) -> usize {
        while d[x] != x {
            d[x] = d[d[x]];
            x = d[x];
        }
        x
    }
    let mut edges = Vec::new();
    for (a, b, _) in all {
        let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
        if ra != rb {
            dsu[ra] = rb;
            edges.push((a, b, conductance(&mut rng, weighted)));
        } else if rng.gen_bool(keep) {
            edges.push((a, b, conductance(&mut rng, weighted)));
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are valid")
}

/// Two blocks sharing exactly one cut vertex (id `a_nodes - 1`).
pub fn two_blocks(a_nodes: usize, b_nodes: usize, seed: u64) -> Graph {
    let a = connected_erdos_renyi(a_nodes, 0.3, true, seed);
    let b = connected_erdos_renyi(b_nodes, 0.3, true, seed.wrapping_add(1));
    let shift = a_nodes - 1;
    let mut edges: Vec<_> = a.edges().collect();
    edges.extend(b.edges().map(|(x, y, c)| (x + shift, y + shift, c)));
    Graph::from_edges(a_nodes + b_nodes - 1, &edges).expect("generated edges are valid")
}
