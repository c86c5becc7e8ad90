use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::fs::File;
use std::hash::{Hash, Hasher};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use resdist_core::flow::{path_length, MetricParams};
use resdist_core::graph::parse_dimacs_co;
use resdist_core::oracle::{
    cut_identity, dense_laplacian, electrical_flow_reference, resistance_matrix, schur_complement, submatrix_inverse,
    DenseMatrix, SIZE_GUARD,
};
use resdist_core::rng::seeded;
use resdist_core::{
    alternative_paths, build_labels, electrical_flow, mde_decompose, query_pair as pair_query,
    query_source as source_query, route_metrics, shortest_path_length, Graph, LabelIndex, NodeId,
};
use serde::Serialize;
use serde_json::json;

use crate::input::{check_matches, input_error, load_graph, load_index, resolve, CliError};
use crate::GraphArgs;

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable report"));
}

#[derive(Serialize)]
struct BuildStats {
    n: usize,
    m: usize,
    components: usize,
    /// Tree height per component, in nodes.
    heights: Vec<usize>,
    height: usize,
    treewidth: usize,
    labels: usize,
    index_bytes: usize,
    build_ms: f64,
}

pub fn build(args: &GraphArgs, output: &Path, json: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let g = load_graph(args)?;
    eprintln!("{}", g.report());
    let td = mde_decompose(&g);
    let idx = build_labels(&g, &td).map_err(|e| CliError::Build(e.to_string()))?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let bytes = idx.to_bytes();
    std::fs::write(output, &bytes).map_err(input_error(&output.display().to_string()))?;

    let stats = BuildStats {
        n: g.node_count(),
        m: g.edge_count(),
        components: g.component_count(),
        heights: td.tree_stats().iter().map(|s| s.height).collect(),
        height: td.height(),
        treewidth: td.width(),
        labels: idx.label_count(),
        index_bytes: bytes.len(),
        build_ms,
    };
    if json {
        print_json(&stats);
    } else {
        println!(
            "n={} m={} components={} h_G={} tw={} labels={} index_bytes={} time_ms={:.1}",
            stats.n, stats.m, stats.components, stats.height, stats.treewidth, stats.labels, stats.index_bytes, build_ms
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct PairReport {
    s: u64,
    t: u64,
    r: Option<f64>,
    connected: bool,
    labels_touched: usize,
    time_ns: u128,
}

pub fn query_pair(index: &Path, s: u64, t: u64) -> Result<(), CliError> {
    let idx = load_index(index)?;
    let (si, ti) = (resolve(&idx, s)?, resolve(&idx, t)?);
    let start = Instant::now();
    let r = pair_query(&idx, si, ti).map_err(|e| CliError::Input(e.to_string()))?;
    let time_ns = start.elapsed().as_nanos();
    print_json(&PairReport {
        s,
        t,
        r: r.connected.then_some(r.resistance),
        connected: r.connected,
        labels_touched: r.labels_touched,
        time_ns,
    });
    Ok(())
}

#[derive(Serialize)]
struct SourceSummary {
    s: u64,
    n: usize,
    reachable: usize,
    max_r: f64,
    work: usize,
    time_ns: u128,
    output: Option<String>,
}

fn write_csv<W: Write>(mut out: W, idx: &LabelIndex, r: &[f64]) -> io::Result<()> {
    writeln!(out, "external_id,r")?;
    for (u, x) in r.iter().enumerate() {
        if x.is_finite() {
            writeln!(out, "{},{}", idx.external_id(u), x)?;
        } else {
            writeln!(out, "{},inf", idx.external_id(u))?;
        }
    }
    out.flush()
}

fn write_binary<W: Write>(mut out: W, r: &[f64]) -> io::Result<()> {
    for x in r {
        out.write_all(&x.to_le_bytes())?;
    }
    out.flush()
}

pub fn query_source(index: &Path, s: u64, output: Option<&Path>, binary: bool) -> Result<(), CliError> {
    let idx = load_index(index)?;
    let si = resolve(&idx, s)?;
    let start = Instant::now();
    let result = source_query(&idx, si).map_err(|e| CliError::Input(e.to_string()))?;
    let time_ns = start.elapsed().as_nanos();
    let finite = result.resistance.iter().filter(|x| x.is_finite());
    let summary = SourceSummary {
        s,
        n: idx.node_count(),
        reachable: finite.clone().count(),
        max_r: finite.fold(0.0, |m, &x| m.max(x)),
        work: result.work,
        time_ns,
        output: output.map(|p| p.display().to_string()),
    };
    match output {
        Some(path) => {
            let file = BufWriter::new(File::create(path).map_err(input_error(&path.display().to_string()))?);
            let written = if binary { write_binary(file, &result.resistance) } else { write_csv(file, &idx, &result.resistance) };
            written.map_err(input_error(&path.display().to_string()))?;
            print_json(&summary);
        }
        None => {
            write_csv(BufWriter::new(io::stdout().lock()), &idx, &result.resistance).map_err(input_error("stdout"))?;
            eprintln!("{}", serde_json::to_string(&summary).expect("serializable report"));
        }
    }
    Ok(())
}

fn load_pair(index: &Path, graph: &GraphArgs) -> Result<(LabelIndex, Graph), CliError> {
    let idx = load_index(index)?;
    let g = load_graph(graph)?;
    check_matches(&idx, &g)?;
    Ok((idx, g))
}

pub fn flow(index: &Path, graph: &GraphArgs, s: u64, t: u64) -> Result<(), CliError> {
    let (idx, g) = load_pair(index, graph)?;
    let (si, ti) = (resolve(&idx, s)?, resolve(&idx, t)?);
    let f = electrical_flow(&idx, &g, si, ti).map_err(|e| CliError::Input(e.to_string()))?;
    let edges: Vec<_> = f
        .edges
        .iter()
        .map(|&(u, v, x)| json!({ "u": g.external_id(u), "v": g.external_id(v), "flow": x }))
        .collect();
    print_json(&json!({ "s": s, "t": t, "r": f.potential_drop(), "edges": edges }));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn route(
    index: &Path,
    graph: &GraphArgs,
    s: u64,
    t: u64,
    k: usize,
    params: MetricParams,
    coords: Option<&Path>,
    coord_scale: f64,
) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Input("k must be at least 1".into()));
    }
    let (idx, g) = load_pair(index, graph)?;
    let (si, ti) = (resolve(&idx, s)?, resolve(&idx, t)?);
    let f = electrical_flow(&idx, &g, si, ti).map_err(|e| CliError::Input(e.to_string()))?;
    let paths = alternative_paths(&f, &g, k).map_err(|e| CliError::Input(e.to_string()))?;
    let shortest = shortest_path_length(&g, si, ti).expect("flow exists only inside a component");
    let node_paths: Vec<Vec<NodeId>> = paths.iter().map(|p| p.nodes.clone()).collect();
    let metrics = route_metrics(&node_paths, &g, shortest, params);
    let external = |p: &[NodeId]| p.iter().map(|&u| g.external_id(u)).collect::<Vec<_>>();

    let mut report = json!({
        "s": s,
        "t": t,
        "k": k,
        "paths": paths.iter().map(|p| json!({
            "nodes": external(&p.nodes),
            "bottleneck": p.bottleneck,
            "length": path_length(&g, &p.nodes),
        })).collect::<Vec<_>>(),
        "shortest_length": shortest,
        "metrics": {
            "length_ratio": metrics.length_ratio,
            "diversity": metrics.diversity,
            "robustness": metrics.robustness,
        },
        "removal_prob": params.removal_prob,
        "trials": params.trials,
        "seed": params.seed,
    });
    if let Some(path) = coords {
        let file = File::open(path).map_err(input_error(&path.display().to_string()))?;
        let table = parse_dimacs_co(io::BufReader::new(file)).map_err(|e| CliError::Input(e.to_string()))?;
        let mut features = Vec::new();
        for (rank, p) in paths.iter().enumerate() {
            let line = p
                .nodes
                .iter()
                .map(|&u| {
                    let id = g.external_id(u);
                    table
                        .get(&id)
                        .map(|&(x, y)| [x * coord_scale, y * coord_scale])
                        .ok_or_else(|| CliError::Input(format!("no coordinates for node {id}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            features.push(json!({
                "type": "Feature",
                "geometry": { "type": "LineString", "coordinates": line },
                "properties": { "rank": rank, "bottleneck": p.bottleneck },
            }));
        }
        report["geojson"] = json!({ "type": "FeatureCollection", "features": features });
    }
    print_json(&report);
    Ok(())
}

pub fn stats(index: Option<&Path>, graph: Option<&GraphArgs>) -> Result<(), CliError> {
    let mut report = serde_json::Map::new();
    if let Some(path) = index {
        let idx = load_index(path)?;
        let h = idx.hierarchy();
        report.insert(
            "index".into(),
            json!({
                "n": idx.node_count(),
                "components": h.roots().len(),
                "heights": h.tree_heights(),
                "height": h.height(),
                "labels": idx.label_count(),
                "weighted": idx.is_weighted(),
                "memory_bytes": idx.memory_bytes(),
            }),
        );
    }
    if let Some(args) = graph {
        let g = load_graph(args)?;
        let td = mde_decompose(&g);
        let h = td.hierarchy();
        let labels: usize = (0..g.node_count()).map(|u| h.depth(u) as usize).sum();
        report.insert(
            "graph".into(),
            json!({
                "n": g.node_count(),
                "m": g.edge_count(),
                "max_degree": g.max_degree(),
                "components": g.component_count(),
                "heights": h.tree_heights(),
                "height": td.height(),
                "treewidth": td.width(),
                "labels": labels,
                "weighted": g.is_weighted(),
            }),
        );
    }
    print_json(&report);
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    name: &'static str,
    passed: bool,
    max_diff: Option<f64>,
    note: Option<String>,
}

impl CheckReport {
    fn measured(name: &'static str, max_diff: f64, tolerance: f64) -> Self {
        Self { name, passed: max_diff <= tolerance, max_diff: Some(max_diff), note: None }
    }

    fn skipped(name: &'static str, note: &str) -> Self {
        Self { name, passed: true, max_diff: None, note: Some(note.into()) }
    }
}

fn resistance_diff(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => (a - b).abs(),
        (false, false) => 0.0,
        _ => f64::INFINITY,
    }
}

fn cholesky_sum(idx: &LabelIndex) -> DenseMatrix {
    let n = idx.node_count();
    let h = idx.hierarchy();
    let mut m = DenseMatrix::zeros(n, n);
    for v in 0..n {
        let label = idx.label(v);
        if label.is_empty() {
            continue;
        }
        for (i, &a) in h.subtree(v).iter().enumerate() {
            for (j, &b) in h.subtree(v).iter().enumerate() {
                m[(a, b)] += label[i] * label[j] / label[0];
            }
        }
    }
    m
}

fn hop_distances(g: &Graph, s: NodeId) -> Vec<usize> {
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

pub fn verify(graph: &GraphArgs, index: Option<&Path>, pairs: usize, seed: u64) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let n = g.node_count();
    if n > SIZE_GUARD {
        return Err(CliError::Input(format!("graph has {n} nodes; verification is limited to {SIZE_GUARD}")));
    }
    let idx = match index {
        Some(path) => {
            let idx = load_index(path)?;
            check_matches(&idx, &g)?;
            idx
        }
        None => LabelIndex::build(&g).map_err(|e| CliError::Build(e.to_string()))?,
    };
    let oracle_err = |e: resdist_core::oracle::OracleError| CliError::Verify(format!("oracle failed: {e}"));
    let mut rng = seeded(seed);
    let mut checks = Vec::new();

    let reference = resistance_matrix(&g).map_err(oracle_err)?;
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let r = pair_query(&idx, s, t).expect("ids in range").resistance;
        worst = worst.max(resistance_diff(r, reference[(s, t)]));
    }
    checks.push(CheckReport::measured("pairs", worst, 1e-8));

    let l = dense_laplacian(&g).map_err(oracle_err)?;
    let roots = idx.hierarchy().roots().to_vec();
    let grounded = submatrix_inverse(&l, &roots).map_err(oracle_err)?;
    checks.push(CheckReport::measured("cholesky_sum", cholesky_sum(&idx).max_abs_diff(&grounded), 1e-9));

    // Nested grounded inverses: U1 is a random half of the non-root nodes.
    let u2: Vec<NodeId> = (0..n).filter(|v| !roots.contains(v)).collect();
    let u1: Vec<NodeId> = u2.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if u1.is_empty() {
        checks.push(CheckReport::skipped("nested_schur", "no inner set"));
    } else {
        let pos: Vec<usize> = u1.iter().map(|v| u2.binary_search(v).expect("subset")).collect();
        let schur = schur_complement(&grounded.submatrix(&u2, &u2), &pos).map_err(oracle_err)?;
        let outside: Vec<NodeId> = (0..n).filter(|v| u1.binary_search(v).is_err()).collect();
        let direct = submatrix_inverse(&l, &outside).map_err(oracle_err)?.submatrix(&u1, &u1);
        checks.push(CheckReport::measured("nested_schur", schur.max_abs_diff(&direct), 1e-9));
    }

    let s = rng.gen_range(0..n);
    let dist = hop_distances(&g, s);
    let far: Vec<NodeId> = (0..n).filter(|&t| dist[t] != usize::MAX && dist[t] >= 2).collect();
    if g.component_count() != 1 {
        checks.push(CheckReport::skipped("cut_identity", "graph is disconnected"));
    } else if far.is_empty() {
        checks.push(CheckReport::skipped("cut_identity", "no pair is separated by a vertex cut"));
    } else {
        let t = far[rng.gen_range(0..far.len())];
        let layer = rng.gen_range(1..dist[t]);
        let cut: Vec<NodeId> = (0..n).filter(|&u| dist[u] == layer).collect();
        let parts = cut_identity(&g, &cut, s, t).map_err(oracle_err)?;
        let r = pair_query(&idx, s, t).expect("ids in range").resistance;
        let diff = (parts.recombined() - parts.direct).abs().max((r - parts.direct).abs());
        checks.push(CheckReport::measured("cut_identity", diff, 1e-9));
    }

    let same: Vec<NodeId> = (0..n).filter(|&t| t != s && g.component_id(t) == g.component_id(s)).collect();
    if same.is_empty() {
        checks.push(CheckReport::skipped("flow_reference", "isolated source"));
    } else {
        let t = same[rng.gen_range(0..same.len())];
        let ours = electrical_flow(&idx, &g, s, t).map_err(|e| CliError::Verify(e.to_string()))?;
        let theirs = electrical_flow_reference(&g, s, t).map_err(oracle_err)?;
        let diff = ours.edges.iter().zip(&theirs).map(|(a, b)| (a.2 - b.2).abs()).fold(0.0, f64::max);
        checks.push(CheckReport::measured("flow_reference", diff, 1e-9));
    }

    let passed = checks.iter().all(|c| c.passed);
    print_json(&json!({ "n": n, "pairs": pairs, "seed": seed, "max_pair_diff": worst, "checks": checks, "passed": passed }));
    if passed {
        Ok(())
    } else {
        Err(CliError::Verify("verification failed".into()))
    }
}

#[derive(Serialize)]
struct Distribution {
    count: usize,
    mean: f64,
    median: f64,
    p99: f64,
    min: f64,
    max: f64,
}

fn distribution(mut xs: Vec<f64>) -> Option<Distribution> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let at = |q: f64| xs[((q * xs.len() as f64).ceil() as usize).clamp(1, xs.len()) - 1];
    Some(Distribution {
        count: xs.len(),
        mean: xs.iter().sum::<f64>() / xs.len() as f64,
        median: at(0.5),
        p99: at(0.99),
        min: xs[0],
        max: xs[xs.len() - 1],
    })
}

pub fn bench(index: &Path, pairs: usize, sources: usize, seed: u64, threads: usize) -> Result<(), CliError> {
    let idx = load_index(index)?;
    let n = idx.node_count();
    let mut rng = seeded(seed);
    let pair_ids: Vec<(NodeId, NodeId)> = (0..pairs).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let source_ids: Vec<NodeId> = (0..sources).map(|_| rng.gen_range(0..n)).collect();
    let mut hasher = DefaultHasher::new();
    pair_ids.hash(&mut hasher);
    source_ids.hash(&mut hasher);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let (pair_runs, source_runs): (Vec<(f64, usize)>, Vec<(f64, usize)>) = pool.install(|| {
        let p = pair_ids
            .par_iter()
            .map(|&(s, t)| {
                let start = Instant::now();
                let r = pair_query(&idx, s, t).expect("sampled ids are valid");
                (start.elapsed().as_nanos() as f64, r.labels_touched)
            })
            .collect();
        let q = source_ids
            .par_iter()
            .map(|&s| {
                let start = Instant::now();
                let r = source_query(&idx, s).expect("sampled ids are valid");
                (start.elapsed().as_nanos() as f64, r.work)
            })
            .collect();
        (p, q)
    });

    let split = |runs: Vec<(f64, usize)>| {
        let (t, w): (Vec<f64>, Vec<f64>) = runs.into_iter().map(|(t, w)| (t, w as f64)).unzip();
        (distribution(t), distribution(w))
    };
    let (pair_ns, touched) = split(pair_runs);
    let (source_ns, work) = split(source_runs);
    print_json(&json!({
        "n": n,
        "seed": seed,
        "threads": threads.max(1),
        "sample_digest": format!("{:016x}", hasher.finish()),
        "pair": { "count": pairs, "latency_ns": pair_ns, "labels_touched": touched },
        "source": { "count": sources, "latency_ns": source_ns, "work": work },
    }));
    Ok(())
}
