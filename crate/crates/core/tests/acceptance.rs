//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! gating criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use resdist_core::generators::{self, NINE_NODE_EDGES};
use resdist_core::oracle::{
    cut_identity, dense_laplacian, grounded_resistance, pseudo_inverse, submatrix_inverse, partition_resistance,
};
use resdist_core::rng::seeded;
use resdist_core::{electrical_flow, query_pair, query_source, Graph, LabelIndex, NodeId};

use common::{bfs, cholesky_sum, pinv_resistance, sweep_graph};

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Check {
    Check { pass, detail }
}

// vk -> id k-1
const V1: NodeId = 0;
const V2: NodeId = 1;
const V3: NodeId = 2;
const V4: NodeId = 3;
const V5: NodeId = 4;
const V6: NodeId = 5;
const V7: NodeId = 6;
const V8: NodeId = 7;
const V9: NodeId = 8;

fn pair(idx: &LabelIndex, s: NodeId, t: NodeId) -> f64 {
    query_pair(idx, s, t).expect("valid ids").resistance
}

fn worked_example() -> Check {
    let idx = LabelIndex::build(&generators::nine_node_example()).unwrap();
    let a = pair(&idx, V2, V4);
    let b = pair(&idx, V1, V9);
    check(
        (a - 1.61).abs() <= 0.005 && (b - 1.62).abs() <= 0.005,
        format!("r(v2,v4) = {a:.4} (want 1.61), r(v1,v9) = {b:.4} (want 1.62)"),
    )
}

/// The edge list with an extra (v4,v5) edge, as sometimes transcribed.
fn literal_thirteen_edges() -> Check {
    let mut edges: Vec<_> = NINE_NODE_EDGES.iter().map(|&(a, b)| (a - 1, b - 1, 1.0)).collect();
    edges.push((V4, V5, 1.0));
    let idx = LabelIndex::build(&Graph::from_edges(9, &edges).unwrap()).unwrap();
    let a = pair(&idx, V2, V4);
    check(
        (a - 1.61).abs() <= 0.005,
        format!("with an added v4-v5 edge r(v2,v4) = {a:.4}; 1.61 is unattainable on that graph"),
    )
}

fn edge_removal() -> Check {
    let g = generators::nine_node_example().without_edge(V8, V9);
    let idx = LabelIndex::build(&g).unwrap();
    let r = pair(&idx, V2, V4);
    check((r - 1.89).abs() <= 0.005, format!("r(v2,v4) without (v8,v9) = {r:.4} (want 1.89)"))
}

fn flow_anchor() -> Check {
    let g = generators::nine_node_example();
    let idx = LabelIndex::build(&g).unwrap();
    let f = electrical_flow(&idx, &g, V2, V4).unwrap();
    let got = [f.flow(V2, V9).unwrap(), f.flow(V9, V8).unwrap(), f.flow(V8, V4).unwrap()];
    let anchors_ok = got.iter().zip([0.59, 0.36, 0.66]).all(|(x, want)| (x - want).abs() <= 0.005);

    let net = f.net_outflow();
    let conservation = (0..9)
        .map(|u| {
            let want = if u == V2 { 1.0 } else if u == V4 { -1.0 } else { 0.0 };
            (net[u] - want).abs()
        })
        .fold(0.0, f64::max);

    let r = pair(&idx, V2, V4);
    let paths: [&[NodeId]; 3] = [&[V2, V9, V8, V4], &[V2, V3, V7, V8, V4], &[V2, V9, V5, V6, V4]];
    let kvl = paths
        .iter()
        .map(|p| (p.windows(2).map(|w| f.flow(w[0], w[1]).unwrap()).sum::<f64>() - r).abs())
        .fold(0.0, f64::max);
    check(
        anchors_ok && conservation <= 1e-9 && kvl <= 1e-9,
        format!(
            "flows {:.3}/{:.3}/{:.3}, conservation err {conservation:.1e}, path-sum err {kvl:.1e}",
            got[0], got[1], got[2]
        ),
    )
}

struct SweepStats {
    graphs: usize,
    pair_diff: f64,
    cholesky_diff: f64,
    elapsed: Duration,
}

fn oracle_sweep() -> SweepStats {
    let start = Instant::now();
    let mut pair_diff: f64 = 0.0;
    let mut cholesky_diff: f64 = 0.0;
    for seed in 0..100u64 {
        let g = sweep_graph(seed, 5, 200);
        let n = g.node_count();
        let l = dense_laplacian(&g).unwrap();
        let pinv = pseudo_inverse(&l).unwrap();
        let idx = LabelIndex::build(&g).unwrap();
        for s in 0..n {
            for t in s..n {
                pair_diff = pair_diff.max((pair(&idx, s, t) - pinv_resistance(&pinv, s, t)).abs());
            }
        }
        let root = idx.hierarchy().roots()[0];
        let grounded = submatrix_inverse(&l, &[root]).unwrap();
        cholesky_diff = cholesky_diff.max(cholesky_sum(&idx).max_abs_diff(&grounded));
    }
    SweepStats { graphs: 100, pair_diff, cholesky_diff, elapsed: start.elapsed() }
}

fn formulation_cross_checks() -> Check {
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    let mut seed = 1000u64;
    let mut cases = [0usize; 3];
    while draws < 50 {
        seed += 1;
        let g = sweep_graph(seed, 6, 100);
        let n = g.node_count();
        let mut rng = seeded(seed);
        let s = rng.gen_range(0..n);
        let dist = bfs(&g, s);
        let far: Vec<NodeId> = (0..n).filter(|&t| dist[t] >= 2).collect();
        let Some(&t) = far.choose(&mut rng) else { continue };

        // Partition case cycles through: both inner, mixed, both outer.
        let case = draws % 3;
        let mut inner: Vec<NodeId> = (0..n).filter(|_| rng.gen_bool(0.5)).filter(|&u| u != s && u != t).collect();
        match case {
            0 => inner.extend([s, t]),
            1 => inner.push(s),
            _ => {}
        }
        inner.sort_unstable();
        if inner.is_empty() || inner.len() == n {
            continue;
        }
        cases[case] += 1;

        let l = dense_laplacian(&g).unwrap();
        let ground = rng.gen_range(0..n);
        let layer = rng.gen_range(1..dist[t]);
        let cut: Vec<NodeId> = (0..n).filter(|&u| dist[u] == layer).collect();
        let cut_parts = cut_identity(&g, &cut, s, t).unwrap();
        let idx = LabelIndex::build(&g).unwrap();
        let values = [
            cut_parts.direct,
            grounded_resistance(&l, ground, s, t).unwrap(),
            partition_resistance(&l, &inner, s, t).unwrap(),
            cut_parts.recombined(),
            pair(&idx, s, t),
        ];
        for a in values {
            for b in values {
                worst = worst.max((a - b).abs());
            }
        }
        draws += 1;
    }
    check(
        worst <= 1e-9,
        format!("50 draws (cases inner/mixed/outer = {}/{}/{}), max pairwise diff {worst:.2e}", cases[0], cases[1], cases[2]),
    )
}

fn source_pair_agreement(g: &Graph, sources: usize, seed: u64) -> (f64, Duration, Duration, usize) {
    let idx = LabelIndex::build(g).unwrap();
    let n = g.node_count();
    let mut rng = seeded(seed);
    let mut worst: f64 = 0.0;
    let mut source_time = Duration::ZERO;
    let mut pair_time = Duration::ZERO;
    let mut pair_count = 0;
    for _ in 0..sources {
        let s = rng.gen_range(0..n);
        let t0 = Instant::now();
        let src = query_source(&idx, s).unwrap();
        source_time += t0.elapsed();
        let t1 = Instant::now();
        let pairs: Vec<f64> = (0..n).map(|t| pair(&idx, s, t)).collect();
        pair_time += t1.elapsed();
        pair_count += n;
        for t in 0..n {
            worst = worst.max((src.resistance[t] - pairs[t]).abs());
        }
    }
    (worst, source_time / sources as u32, pair_time / pair_count as u32, n)
}

fn large_planar() -> Check {
    let g = generators::planar_road_like(100, 100, 0.35, true, 7);
    let start = Instant::now();
    let (worst, per_source, per_pair, n) = source_pair_agreement(&g, 20, 77);
    let faster = per_source.as_secs_f64() < n as f64 * per_pair.as_secs_f64();
    check(
        worst <= 1e-9 && faster,
        format!(
            "n = {n}, 20 sources, max diff {worst:.2e}, source {per_source:?} vs n x pair {:?} ({:.1?} total)",
            per_pair * n as u32,
            start.elapsed()
        ),
    )
}

fn structural_counts() -> Check {
    let mut ok = true;
    let mut graphs = 0;
    for seed in 0..20u64 {
        let g = sweep_graph(seed + 500, 5, 150);
        let idx = LabelIndex::build(&g).unwrap();
        let h = idx.hierarchy();
        let n = g.node_count();
        let depth_sum: usize = (0..n).map(|u| h.depth(u) as usize).sum();
        ok &= idx.label_count() == depth_sum;
        for s in 0..n {
            for t in 0..n {
                let touched = query_pair(&idx, s, t).unwrap().labels_touched;
                ok &= touched <= (h.depth(s) + h.depth(t)) as usize;
                ok &= touched <= 2 * h.height();
            }
        }
        graphs += 1;
    }
    check(ok, format!("{graphs} graphs: label count = Σ depth, labels_touched ≤ depth(s)+depth(t) for all pairs"))
}

fn metric_axioms() -> Check {
    let g = generators::grid_with_chords(20, 25, 0.3, false, 3);
    let idx = LabelIndex::build(&g).unwrap();
    let n = g.node_count();
    let mut rng = seeded(10);
    let (mut symmetric, mut identity) = (true, true);
    let (mut triangle, mut domination): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let (s, t, u) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let st = pair(&idx, s, t);
        symmetric &= st == pair(&idx, t, s);
        identity &= pair(&idx, s, s) == 0.0;
        triangle = triangle.max(st - pair(&idx, s, u) - pair(&idx, u, t));
        domination = domination.max(st - bfs(&g, s)[t] as f64);
    }
    check(
        symmetric && identity && triangle <= 1e-9 && domination <= 1e-9,
        format!(
            "1000 triples: symmetric {symmetric}, r(s,s)=0 {identity}, triangle excess {triangle:.2e}, r - d excess {domination:.2e}"
        ),
    )
}

fn grid_smoke() -> Check {
    let start = Instant::now();
    let g = generators::grid(200, 200);
    let idx = LabelIndex::build(&g).unwrap();
    let build = start.elapsed();
    let bytes = idx.to_bytes();
    let round_trip = LabelIndex::from_bytes(&bytes).map(|b| b == idx).unwrap_or(false);
    let h = idx.hierarchy().height();
    let mut rng = seeded(11);
    let n = g.node_count();
    let within = (0..1000).all(|_| {
        let r = query_pair(&idx, rng.gen_range(0..n), rng.gen_range(0..n)).unwrap();
        r.labels_touched <= 2 * h
    });
    let (worst, _, _, _) = source_pair_agreement(&g, 5, 12);
    check(
        round_trip && within && worst <= 1e-9,
        format!(
            "200x200 grid: build {build:.1?}, h_G {h}, {} labels ({} MB file), round trip {round_trip}, touched ≤ 2h {within}, source/pair diff {worst:.2e}",
            idx.label_count(),
            bytes.len() >> 20
        ),
    )
}

fn main() -> ExitCode {
    let mut failed_gating = 0;
    let mut report = |id: &str, gating: bool, c: Check| {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let tag = if gating { "" } else { " (non-gating)" };
        println!("criterion {id}{tag}: {status} - {}", c.detail);
        if gating && !c.pass {
            failed_gating += 1;
        }
    };

    report("1", true, worked_example());
    report("1 [informational]", false, literal_thirteen_edges());
    report("2", true, edge_removal());
    report("3", true, flow_anchor());
    let sweep = oracle_sweep();
    report(
        "4",
        true,
        check(
            sweep.pair_diff <= 1e-8 && sweep.elapsed < Duration::from_secs(300),
            format!("{} graphs, all pairs, max |label - oracle| {:.2e} in {:.1?}", sweep.graphs, sweep.pair_diff, sweep.elapsed),
        ),
    );
    report(
        "5",
        true,
        check(sweep.cholesky_diff <= 1e-9, format!("max |Σ S S^T / S - L_root^-1| {:.2e}", sweep.cholesky_diff)),
    );
    report("6", true, formulation_cross_checks());
    report("7", true, large_planar());
    report("8", true, structural_counts());
    report(
        "9",
        true,
        check(sweep.pair_diff <= 1e-9, format!("max deviation from oracle on n ≤ 200: {:.2e}", sweep.pair_diff)),
    );
    report("10", true, metric_axioms());
    report("11", false, grid_smoke());

    if failed_gating == 0 {
        println!("acceptance: all gating criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed_gating} gating criteria failed");
        ExitCode::FAILURE
    }
}
