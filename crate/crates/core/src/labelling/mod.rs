//! Resistance labelling over a vertex hierarchy.
//!
//! For every non-root node `v` the index stores one column of the inverse
//! Laplacian submatrix at the moment `v` is eliminated, restricted to the
//! subtree of `v`: `S[v,u]` for `u` in `SubTree(v)`. Entries outside the
//! subtree are zero and not stored. Columns are laid out in DFS order, so
//! `S[v,u]` lives at `values[offsets[v] + dfs(u) - dfs(v)]`.

mod io;

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::treedecomp::{mde_decompose, TreeDecomposition, TreeError, VertexHierarchy};

pub use io::IndexIoError;

/// Smallest accepted elimination denominator.
pub const PIVOT_EPSILON: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum LabelError {
    #[error("non-positive pivot at node {0}")]
    NonPositivePivot(NodeId),
    #[error("walk from neighbor {0} leaves the subtree of node {1}")]
    HierarchyViolation(NodeId, NodeId),
    #[error("node {0} is not an ancestor of node {1}")]
    NotAnAncestor(NodeId, NodeId),
    #[error("hierarchy has {hierarchy} nodes but graph has {graph}")]
    SizeMismatch { hierarchy: usize, graph: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelIndex {
    hierarchy: VertexHierarchy,
    offsets: Vec<usize>,
    values: Vec<f64>,
    diagonal: Vec<f64>,
    weighted: bool,
    external_ids: Vec<u64>,
    lookup: HashMap<u64, NodeId>,
}

/// Runs the label construction over an existing decomposition.
pub fn build_labels(g: &Graph, t: &TreeDecomposition) -> Result<LabelIndex, LabelError> {
    build_on_hierarchy(g, t.hierarchy().clone())
}

/// Construction over any hierarchy in which every edge joins a node to one of
/// its ancestors.
pub fn build_on_hierarchy(g: &Graph, h: VertexHierarchy) -> Result<LabelIndex, LabelError> {
    let n = g.node_count();
    if h.node_count() != n {
        return Err(LabelError::SizeMismatch { hierarchy: h.node_count(), graph: n });
    }
    let mut offsets = vec![0usize; n + 1];
    for v in 0..n {
        offsets[v + 1] = offsets[v] + if h.is_root(v) { 0 } else { h.subtree_size(v) };
    }
    let mut values = vec![0.0; offsets[n]];
    let mut diagonal = vec![0.0; n];
    // Dense accumulator indexed by DFS position; zero outside the live range.
    let mut acc = vec![0.0; n];

    for pos in (0..n).rev() {
        let vi = h.node_at(pos);
        if h.is_root(vi) {
            continue;
        }
        let size = h.subtree_size(vi);
        let end = pos + size;
        let mut denominator = g.weighted_degree(vi);
        let processed: Vec<(NodeId, f64)> = g
            .neighbors(vi)
            .iter()
            .filter(|a| h.dfs_order(a.node) > pos)
            .map(|a| (a.node, a.conductance))
            .collect();

        for &(w, c) in &processed {
            let wpos = h.dfs_order(w);
            if wpos >= end {
                return Err(LabelError::HierarchyViolation(w, vi));
            }
            let mut vk = w;
            while vk != vi {
                let kpos = h.dfs_order(vk);
                if kpos <= pos || kpos >= end {
                    return Err(LabelError::HierarchyViolation(w, vi));
                }
                let col = &values[offsets[vk]..offsets[vk + 1]];
                let ratio = c * col[wpos - kpos] / col[0];
                for (a, s) in acc[kpos..kpos + col.len()].iter_mut().zip(col) {
                    *a += s * ratio;
                }
                vk = h.parent(vk).ok_or(LabelError::HierarchyViolation(w, vi))?;
            }
        }
        for &(w, c) in &processed {
            denominator -= c * acc[h.dfs_order(w)];
        }
        if denominator.is_nan() || denominator <= PIVOT_EPSILON {
            return Err(LabelError::NonPositivePivot(vi));
        }

        let col = &mut values[offsets[vi]..offsets[vi + 1]];
        let inv = 1.0 / denominator;
        col[0] = inv;
        for k in 1..size {
            col[k] = acc[pos + k] / denominator;
        }
        for (k, s) in col.iter().enumerate() {
            diagonal[h.node_at(pos + k)] += s * s * denominator;
        }
        acc[pos..end].iter_mut().for_each(|a| *a = 0.0);
    }

    let external_ids = g.external_ids().to_vec();
    Ok(LabelIndex::assemble(h, offsets, values, diagonal, g.is_weighted(), external_ids))
}

impl LabelIndex {
    /// Decomposes `g` and builds its labels.
    pub fn build(g: &Graph) -> Result<Self, LabelError> {
        build_labels(g, &mde_decompose(g))
    }

    fn assemble(
        hierarchy: VertexHierarchy,
        offsets: Vec<usize>,
        values: Vec<f64>,
        diagonal: Vec<f64>,
        weighted: bool,
        external_ids: Vec<u64>,
    ) -> Self {
        let lookup = external_ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Self { hierarchy, offsets, values, diagonal, weighted, external_ids, lookup }
    }

    pub fn node_count(&self) -> usize {
        self.diagonal.len()
    }

    pub fn hierarchy(&self) -> &VertexHierarchy {
        &self.hierarchy
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// Stored column of `v` in DFS order of its subtree; empty for roots.
    pub fn label(&self, v: NodeId) -> &[f64] {
        &self.values[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Pivot `S[v,v]`; `None` for roots.
    pub fn pivot(&self, v: NodeId) -> Option<f64> {
        self.label(v).first().copied()
    }

    /// `S[v,u]`. Zero for a root `v`.
    pub fn label_at(&self, v: NodeId, u: NodeId) -> Result<f64, LabelError> {
        let h = &self.hierarchy;
        if !h.is_ancestor(v, u) {
            return Err(LabelError::NotAnAncestor(v, u));
        }
        Ok(self.label(v).get(h.dfs_order(u) - h.dfs_order(v)).copied().unwrap_or(0.0))
    }

    /// `(L_root^{-1})[u,u]`, the resistance from `u` to its tree root.
    pub fn diagonal(&self, u: NodeId) -> f64 {
        self.diagonal[u]
    }

    pub fn diagonals(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of stored label scalars, excluding the diagonal.
    pub fn label_count(&self) -> usize {
        self.values.len()
    }

    pub fn external_id(&self, u: NodeId) -> u64 {
        self.external_ids[u]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    pub fn internal_id(&self, external: u64) -> Option<NodeId> {
        self.lookup.get(&external).copied()
    }

    /// Same component test via tree membership.
    pub fn connected(&self, s: NodeId, t: NodeId) -> bool {
        self.hierarchy.tree_of(s) == self.hierarchy.tree_of(t)
    }

    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        let n = self.node_count();
        self.values.len() * 8 + self.offsets.len() * 8 + n * (8 + 8 + 8 + 8 + 4 + 8 + 8 + 8)
    }

    /// Overwrites one stored label value. Exists to build negative controls
    /// for verification; the result is no longer a valid index.
    pub fn corrupt_value(&mut self, slot: usize, value: f64) {
        self.values[slot] = value;
    }
}
