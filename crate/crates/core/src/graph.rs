//! Graph ingestion, normalization and connected-component bookkeeping.
//!
//! Two text formats are accepted: a plain whitespace-separated edge list
//! (`u v` or `u v w`, `#` comments) and the 9th DIMACS shortest-path `.gr`
//! format. Both produce [`EdgeRecord`]s keyed by external node labels; the
//! records are then normalized into a [`Graph`] with dense internal ids.

use std::collections::{HashMap, VecDeque};
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

/// Dense internal node id in `0..n`.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed line {0}")]
    MalformedLine(usize),
    #[error("negative weight on line {0}")]
    NegativeWeight(usize),
    #[error("zero weight on line {0}")]
    ZeroWeight(usize),
    #[error("DIMACS input has no problem line")]
    MissingProblemLine,
    #[error("arc before problem line on line {0}")]
    ArcBeforeProblemLine(usize),
    #[error("node id out of range on line {0}")]
    IdOutOfRange(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge list is empty")]
    EmptyGraph,
    #[error("every edge is a self-loop")]
    AllSelfLoops,
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    NodeOutOfRange(NodeId, NodeId, usize),
    #[error("edge ({0}, {1}) has non-positive or non-finite weight")]
    BadWeight(NodeId, NodeId),
}

/// One parsed edge between two external node labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRecord {
    pub u: u64,
    pub v: u64,
    pub weight: f64,
}

impl EdgeRecord {
    pub fn new(u: u64, v: u64, weight: f64) -> Self {
        Self { u, v, weight }
    }
}

/// How the third column of an edge record enters the Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// Weight is the conductance.
    #[default]
    Conductance,
    /// Weight is a resistance; conductance is its reciprocal.
    Resistance,
    /// Every distinct edge gets conductance 1.
    Unweighted,
}

impl FromStr for WeightMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conductance" => Ok(Self::Conductance),
            "resistance" => Ok(Self::Resistance),
            "unweighted" => Ok(Self::Unweighted),
            other => Err(format!("unknown weight mode `{other}`")),
        }
    }
}

fn parse_weight(tok: &str, line: usize) -> Result<f64, ParseError> {
    let w: f64 = tok.parse().map_err(|_| ParseError::MalformedLine(line))?;
    if !w.is_finite() {
        return Err(ParseError::MalformedLine(line));
    }
    if w < 0.0 {
        return Err(ParseError::NegativeWeight(line));
    }
    if w == 0.0 {
        return Err(ParseError::ZeroWeight(line));
    }
    Ok(w)
}

/// Parses a whitespace-separated edge list. Line numbers in errors are 1-based.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<EdgeRecord>, ParseError> {
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(ParseError::MalformedLine(lineno));
        }
        let u: u64 = toks[0].parse().map_err(|_| ParseError::MalformedLine(lineno))?;
        let v: u64 = toks[1].parse().map_err(|_| ParseError::MalformedLine(lineno))?;
        let weight = match toks.get(2) {
            Some(tok) => parse_weight(tok, lineno)?,
            None => 1.0,
        };
        edges.push(EdgeRecord { u, v, weight });
    }
    Ok(edges)
}

/// Parses a DIMACS `.gr` file. Arcs are folded into undirected edges; when
/// an unordered pair appears more than once the smallest weight wins.
pub fn parse_dimacs_gr<R: BufRead>(reader: R) -> Result<Vec<EdgeRecord>, ParseError> {
    let mut declared: Option<u64> = None;
    let mut slot: HashMap<(u64, u64), usize> = HashMap::new();
    let mut edges: Vec<EdgeRecord> = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if declared.is_some() {
                    return Err(ParseError::MalformedLine(lineno));
                }
                let kind = toks.next();
                let n = toks.next().and_then(|t| t.parse::<u64>().ok());
                let m = toks.next().and_then(|t| t.parse::<u64>().ok());
                match (kind, n, m) {
                    (Some("sp"), Some(n), Some(_)) => declared = Some(n),
                    _ => return Err(ParseError::MalformedLine(lineno)),
                }
            }
            Some("a") => {
                let n = declared.ok_or(ParseError::ArcBeforeProblemLine(lineno))?;
                let rest: Vec<&str> = toks.collect();
                if rest.len() != 3 {
                    return Err(ParseError::MalformedLine(lineno));
                }
                let u: u64 = rest[0].parse().map_err(|_| ParseError::MalformedLine(lineno))?;
                let v: u64 = rest[1].parse().map_err(|_| ParseError::MalformedLine(lineno))?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(ParseError::IdOutOfRange(lineno));
                }
                let w = parse_weight(rest[2], lineno)?;
                let key = (u.min(v), u.max(v));
                match slot.get(&key) {
                    Some(&k) => {
                        if w < edges[k].weight {
                            edges[k].weight = w;
                        }
                    }
                    None => {
                        slot.insert(key, edges.len());
                        edges.push(EdgeRecord { u, v, weight: w });
                    }
                }
            }
            Some(_) => return Err(ParseError::MalformedLine(lineno)),
        }
    }
    if declared.is_none() {
        return Err(ParseError::MissingProblemLine);
    }
    Ok(edges)
}

/// Parses a DIMACS `.co` coordinate file (`v id x y`). Coordinates are opaque
/// metadata; they are only used to emit GeoJSON for routes.
pub fn parse_dimacs_co<R: BufRead>(reader: R) -> Result<HashMap<u64, (f64, f64)>, ParseError> {
    let mut coords = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let rest: Vec<&str> = toks.collect();
                if rest.len() != 3 {
                    return Err(ParseError::MalformedLine(lineno));
                }
                let id: u64 = rest[0].parse().map_err(|_| ParseError::MalformedLine(lineno))?;
                let x: f64 = rest[1].parse().map_err(|_| ParseError::MalformedLine(lineno))?;
                let y: f64 = rest[2].parse().map_err(|_| ParseError::MalformedLine(lineno))?;
                coords.insert(id, (x, y));
            }
            _ => continue,
        }
    }
    Ok(coords)
}

/// Counters describing what normalization did to the raw records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub records: usize,
    pub self_loops_dropped: usize,
    pub parallels_merged: usize,
}

impl std::fmt::Display for BuildReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} edge records, {} self-loops dropped, {} parallel edges merged",
            self.records, self.self_loops_dropped, self.parallels_merged
        )
    }
}

/// One adjacency entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adjacent {
    pub node: NodeId,
    /// Electrical conductance, always > 0.
    pub conductance: f64,
    /// Travel length used by routing metrics: the input weight (minimum over
    /// merged parallels) for weighted input, 1 otherwise.
    pub length: f64,
}

/// Normalized undirected graph with positive conductances.
///
/// Adjacency lists are sorted by neighbor id, symmetric, and free of
/// self-loops and duplicates.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<Adjacent>>,
    weighted: bool,
    external_ids: Vec<u64>,
    internal_ids: HashMap<u64, NodeId>,
    component: Vec<usize>,
    component_count: usize,
    edge_count: usize,
    report: BuildReport,
}

/// Normalizes parsed records. Internal ids follow first appearance.
pub fn build_graph(edges: &[EdgeRecord], mode: WeightMode) -> Result<Graph, GraphError> {
    if edges.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let mut report = BuildReport { records: edges.len(), ..Default::default() };
    // Internal ids follow ascending external id, so the decomposition does
    // not depend on the order of lines in the input.
    let mut external_ids: Vec<u64> = edges.iter().filter(|e| e.u != e.v).flat_map(|e| [e.u, e.v]).collect();
    external_ids.sort_unstable();
    external_ids.dedup();
    let internal_ids: HashMap<u64, NodeId> = external_ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut raw = Vec::with_capacity(edges.len());

    for e in edges {
        if e.u == e.v {
            report.self_loops_dropped += 1;
            continue;
        }
        let (a, b) = (internal_ids[&e.u], internal_ids[&e.v]);
        let (conductance, length) = match mode {
            WeightMode::Conductance => (e.weight, e.weight),
            WeightMode::Resistance => (1.0 / e.weight, e.weight),
            WeightMode::Unweighted => (1.0, 1.0),
        };
        if !(conductance.is_finite() && conductance > 0.0) {
            return Err(GraphError::BadWeight(a, b));
        }
        raw.push((a.min(b), a.max(b), conductance, length));
    }
    if raw.is_empty() {
        return Err(GraphError::AllSelfLoops);
    }
    let n = external_ids.len();
    let (mut graph, merged) = assemble(n, raw, mode != WeightMode::Unweighted);
    report.parallels_merged = merged;
    graph.external_ids = external_ids;
    graph.internal_ids = internal_ids;
    graph.report = report;
    Ok(graph)
}

/// Sorts, merges and symmetrizes `(a < b, conductance, length)` triples.
fn assemble(n: usize, mut raw: Vec<(NodeId, NodeId, f64, f64)>, weighted_mode: bool) -> (Graph, usize) {
    raw.sort_by_key(|x| (x.0, x.1));
    let mut merged_edges: Vec<(NodeId, NodeId, f64, f64)> = Vec::with_capacity(raw.len());
    let mut merged = 0;
    for (a, b, c, l) in raw {
        match merged_edges.last_mut() {
            Some(last) if last.0 == a && last.1 == b => {
                merged += 1;
                if weighted_mode {
                    last.2 += c;
                }
                last.3 = last.3.min(l);
            }
            _ => merged_edges.push((a, b, c, l)),
        }
    }
    let mut adjacency: Vec<Vec<Adjacent>> = vec![Vec::new(); n];
    for &(a, b, c, l) in &merged_edges {
        adjacency[a].push(Adjacent { node: b, conductance: c, length: l });
        adjacency[b].push(Adjacent { node: a, conductance: c, length: l });
    }
    for list in &mut adjacency {
        list.sort_by_key(|x| x.node);
    }
    let weighted = merged_edges.iter().any(|e| e.2 != 1.0);
    let (component, component_count) = label_components(&adjacency);
    let graph = Graph {
        adjacency,
        weighted,
        external_ids: (0..n as u64).collect(),
        internal_ids: HashMap::new(),
        component,
        component_count,
        edge_count: merged_edges.len(),
        report: BuildReport::default(),
    };
    (graph, merged)
}

fn label_components(adjacency: &[Vec<Adjacent>]) -> (Vec<usize>, usize) {
    let n = adjacency.len();
    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = count;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for a in &adjacency[u] {
                if component[a.node] == usize::MAX {
                    component[a.node] = count;
                    queue.push_back(a.node);
                }
            }
        }
        count += 1;
    }
    (component, count)
}

impl Graph {
    /// Builds a graph directly on internal ids `0..n` with the given
    /// conductances. External ids equal internal ids; nodes without edges
    /// become singleton components.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Self, GraphError> {
        let mut raw = Vec::with_capacity(edges.len());
        let mut report = BuildReport { records: edges.len(), ..Default::default() };
        for &(a, b, c) in edges {
            if a >= n || b >= n {
                return Err(GraphError::NodeOutOfRange(a, b, n));
            }
            if !(c.is_finite() && c > 0.0) {
                return Err(GraphError::BadWeight(a, b));
            }
            if a == b {
                report.self_loops_dropped += 1;
                continue;
            }
            raw.push((a.min(b), a.max(b), c, c));
        }
        let (mut graph, merged) = assemble(n, raw, true);
        report.parallels_merged = merged;
        graph.internal_ids = (0..n).map(|i| (i as u64, i)).collect();
        graph.report = report;
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of distinct undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn report(&self) -> BuildReport {
        self.report
    }

    pub fn neighbors(&self, u: NodeId) -> &[Adjacent] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sum of incident conductances, the Laplacian diagonal.
    pub fn weighted_degree(&self, u: NodeId) -> f64 {
        self.adjacency[u].iter().map(|a| a.conductance).sum()
    }

    pub fn conductance(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.find(u, v).map(|a| a.conductance)
    }

    pub fn length(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.find(u, v).map(|a| a.length)
    }

    fn find(&self, u: NodeId, v: NodeId) -> Option<&Adjacent> {
        let list = &self.adjacency[u];
        list.binary_search_by_key(&v, |a| a.node).ok().map(|i| &list[i])
    }

    pub fn external_id(&self, u: NodeId) -> u64 {
        self.external_ids[u]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    pub fn internal_id(&self, external: u64) -> Option<NodeId> {
        self.internal_ids.get(&external).copied()
    }

    pub fn component_id(&self, u: NodeId) -> usize {
        self.component[u]
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Undirected edges as `(u, v, conductance)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter().filter(move |a| a.node > u).map(move |a| (u, a.node, a.conductance))
        })
    }

    /// Sparse Laplacian row: weighted degree on the diagonal, negated
    /// conductances elsewhere, sorted by column.
    pub fn laplacian_row(&self, u: NodeId) -> Vec<(NodeId, f64)> {
        let mut row: Vec<(NodeId, f64)> =
            self.adjacency[u].iter().map(|a| (a.node, -a.conductance)).collect();
        let pos = row.partition_point(|&(v, _)| v < u);
        row.insert(pos, (u, self.weighted_degree(u)));
        row
    }

    /// Writes the graph as an edge list of external ids and conductances.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v, c) in self.edges() {
            writeln!(out, "{} {} {}", self.external_ids[u], self.external_ids[v], c)?;
        }
        Ok(())
    }

    /// Copy of the graph with the undirected edge `(u, v)` removed.
    pub fn without_edge(&self, u: NodeId, v: NodeId) -> Graph {
        let mut adjacency = self.adjacency.clone();
        adjacency[u].retain(|a| a.node != v);
        adjacency[v].retain(|a| a.node != u);
        let removed = adjacency[u].len() != self.adjacency[u].len();
        let (component, component_count) = label_components(&adjacency);
        Graph {
            adjacency,
            component,
            component_count,
            edge_count: self.edge_count - usize::from(removed),
            ..self.clone()
        }
    }
}
