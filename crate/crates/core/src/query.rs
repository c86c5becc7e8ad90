//! Pair and single-source resistance queries over a [`LabelIndex`].

use thiserror::Error;

use crate::graph::NodeId;
use crate::labelling::LabelIndex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("node id {0} out of range")]
    InvalidId(NodeId),
    #[error("nodes {0} and {1} lie in different components")]
    DifferentComponents(NodeId, NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairResult {
    pub s: NodeId,
    pub t: NodeId,
    /// `f64::INFINITY` when `connected` is false.
    pub resistance: f64,
    pub connected: bool,
    pub labels_touched: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceResult {
    pub s: NodeId,
    /// `r(s,u)` for every node; infinite outside the component of `s`.
    pub resistance: Vec<f64>,
    /// `(L_root^{-1})[s,u]`, indexed by node id.
    pub column: Vec<f64>,
    /// `n` plus the summed subtree sizes along the path of `s`.
    pub work: usize,
}

fn check(idx: &LabelIndex, v: NodeId) -> Result<(), QueryError> {
    if v < idx.node_count() {
        Ok(())
    } else {
        Err(QueryError::InvalidId(v))
    }
}

pub fn lca(idx: &LabelIndex, s: NodeId, t: NodeId) -> Result<NodeId, QueryError> {
    check(idx, s)?;
    check(idx, t)?;
    idx.hierarchy().lca(s, t).ok_or(QueryError::DifferentComponents(s, t))
}

/// `S[v,u]` for an ancestor-or-self `v` of `u`, with `v` not a root.
#[inline]
fn entry(idx: &LabelIndex, v: NodeId, u: NodeId) -> f64 {
    let h = idx.hierarchy();
    idx.label(v)[h.dfs_order(u) - h.dfs_order(v)]
}

pub fn query_pair(idx: &LabelIndex, s: NodeId, t: NodeId) -> Result<PairResult, QueryError> {
    let h = idx.hierarchy();
    let c = match lca(idx, s, t) {
        Ok(c) => c,
        Err(QueryError::DifferentComponents(..)) => {
            return Ok(PairResult { s, t, resistance: f64::INFINITY, connected: false, labels_touched: 0 })
        }
        Err(e) => return Err(e),
    };

    let branch = |x: NodeId| {
        let mut sum = 0.0;
        let mut v = x;
        while v != c {
            let label = idx.label(v);
            let a = label[h.dfs_order(x) - h.dfs_order(v)];
            sum += a * a / label[0];
            v = h.parent(v).expect("lca is an ancestor");
        }
        sum
    };
    let (sum_s, sum_t) = (branch(s), branch(t));

    let mut common = 0.0;
    let mut v = c;
    while let Some(p) = h.parent(v) {
        let d = entry(idx, v, s) - entry(idx, v, t);
        common += d * d / idx.label(v)[0];
        v = p;
    }
    Ok(PairResult { s, t, resistance: (sum_s + sum_t) + common, connected: true, labels_touched: (h.depth(s) + h.depth(t)) as usize })
}

pub fn query_source(idx: &LabelIndex, s: NodeId) -> Result<SourceResult, QueryError> {
    check(idx, s)?;
    let h = idx.hierarchy();
    let n = idx.node_count();
    // Column accumulated by DFS position so each path node adds one slice.
    let mut by_pos = vec![0.0; n];
    let mut work = n;
    let mut w = s;
    while let Some(p) = h.parent(w) {
        let label = idx.label(w);
        let start = h.dfs_order(w);
        let ratio = label[h.dfs_order(s) - start] / label[0];
        for (c, x) in by_pos[start..start + label.len()].iter_mut().zip(label) {
            *c += x * ratio;
        }
        work += label.len();
        w = p;
    }

    let ds = idx.diagonal(s);
    let tree = h.tree_of(s);
    let column: Vec<f64> = (0..n).map(|u| by_pos[h.dfs_order(u)]).collect();
    let resistance = (0..n)
        .map(|u| {
            if u == s {
                0.0
            } else if h.tree_of(u) != tree {
                f64::INFINITY
            } else {
                (ds + idx.diagonal(u) - 2.0 * column[u]).max(0.0)
            }
        })
        .collect();
    Ok(SourceResult { s, resistance, column, work })
}
