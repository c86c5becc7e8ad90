//! Minimum-degree elimination tree decomposition and the vertex hierarchy
//! derived from it.
//!
//! Eliminating the node of smallest current degree (ties by smallest id),
//! recording its bag and filling in a clique among its neighbors, yields a
//! decomposition where every bag member other than the bag's own node is an
//! ancestor of that node. The hierarchy arrays (parent, depth, DFS order,
//! subtree size) are what the labelling and queries actually consume.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::graph::{Graph, NodeId};

/// Parent sentinel for tree roots.
pub const NO_PARENT: NodeId = NodeId::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("parent array contains a cycle ({visited} of {n} nodes reachable from roots)")]
    CycleDetected { visited: usize, n: usize },
    #[error("node {0} has out-of-range parent {1}")]
    InvalidParent(NodeId, NodeId),
}

/// Rooted forest with DFS numbering. Children are visited in increasing id
/// order; roots in increasing id order.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexHierarchy {
    parent: Vec<NodeId>,
    depth: Vec<u32>,
    dfs_order: Vec<usize>,
    subtree_size: Vec<usize>,
    roots: Vec<NodeId>,
    by_dfs: Vec<NodeId>,
    tree_of: Vec<usize>,
}

/// Fills DFS order, depth and subtree sizes for a parent array.
pub fn dfs_annotate(parent: Vec<NodeId>) -> Result<VertexHierarchy, TreeError> {
    let n = parent.len();
    let mut child_count = vec![0usize; n + 1];
    let mut roots = Vec::new();
    for (v, &p) in parent.iter().enumerate() {
        if p == NO_PARENT {
            roots.push(v);
        } else if p >= n || p == v {
            return Err(TreeError::InvalidParent(v, p));
        } else {
            child_count[p + 1] += 1;
        }
    }
    // CSR children, ascending ids because v is scanned in order.
    for i in 0..n {
        child_count[i + 1] += child_count[i];
    }
    let start = child_count;
    let mut fill = start.clone();
    let mut children = vec![0; start[n]];
    for (v, &p) in parent.iter().enumerate() {
        if p != NO_PARENT {
            children[fill[p]] = v;
            fill[p] += 1;
        }
    }

    let mut dfs_order = vec![usize::MAX; n];
    let mut depth = vec![0u32; n];
    let mut subtree_size = vec![1usize; n];
    let mut tree_of = vec![usize::MAX; n];
    let mut by_dfs = Vec::with_capacity(n);
    let mut stack = Vec::new();
    for (t, &r) in roots.iter().enumerate() {
        stack.push(r);
        while let Some(v) = stack.pop() {
            dfs_order[v] = by_dfs.len();
            by_dfs.push(v);
            tree_of[v] = t;
            if v != r {
                depth[v] = depth[parent[v]] + 1;
            }
            stack.extend(children[start[v]..start[v + 1]].iter().rev());
        }
    }
    if by_dfs.len() != n {
        return Err(TreeError::CycleDetected { visited: by_dfs.len(), n });
    }
    for &v in by_dfs.iter().rev() {
        if parent[v] != NO_PARENT {
            subtree_size[parent[v]] += subtree_size[v];
        }
    }
    Ok(VertexHierarchy { parent, depth, dfs_order, subtree_size, roots, by_dfs, tree_of })
}

impl VertexHierarchy {
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Parent of `v`, or `None` for a root.
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent[v];
        (p != NO_PARENT).then_some(p)
    }

    pub fn parents(&self) -> &[NodeId] {
        &self.parent
    }

    pub fn is_root(&self, v: NodeId) -> bool {
        self.parent[v] == NO_PARENT
    }

    /// Edges to the root of its tree (root depth 0).
    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v]
    }

    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn dfs_order(&self, v: NodeId) -> usize {
        self.dfs_order[v]
    }

    pub fn dfs_orders(&self) -> &[usize] {
        &self.dfs_order
    }

    pub fn subtree_size(&self, v: NodeId) -> usize {
        self.subtree_size[v]
    }

    pub fn subtree_sizes(&self) -> &[usize] {
        &self.subtree_size
    }

    /// Node at DFS position `pos`.
    pub fn node_at(&self, pos: usize) -> NodeId {
        self.by_dfs[pos]
    }

    /// Nodes of the subtree of `v`, in DFS order.
    pub fn subtree(&self, v: NodeId) -> &[NodeId] {
        let start = self.dfs_order[v];
        &self.by_dfs[start..start + self.subtree_size[v]]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Index into [`roots`](Self::roots) of the tree containing `v`.
    pub fn tree_of(&self, v: NodeId) -> usize {
        self.tree_of[v]
    }

    pub fn root_of(&self, v: NodeId) -> NodeId {
        self.roots[self.tree_of[v]]
    }

    /// Ancestor-or-self test via DFS intervals.
    pub fn is_ancestor(&self, a: NodeId, u: NodeId) -> bool {
        let lo = self.dfs_order[a];
        let pos = self.dfs_order[u];
        lo <= pos && pos < lo + self.subtree_size[a]
    }

    /// Iterator from `v` up to and including its root.
    pub fn path_to_root(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(v), move |&w| self.parent(w))
    }

    /// Lowest common ancestor by lifting the deeper node, then walking both
    /// up in lockstep. `None` when the nodes lie in different trees.
    pub fn lca(&self, s: NodeId, t: NodeId) -> Option<NodeId> {
        if self.tree_of[s] != self.tree_of[t] {
            return None;
        }
        let (mut a, mut b) = (s, t);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        Some(a)
    }

    /// Tree height counted in nodes: max depth + 1.
    pub fn height(&self) -> usize {
        self.depth.iter().map(|&d| d as usize + 1).max().unwrap_or(0)
    }

    /// Height (in nodes) of each tree, in root order.
    pub fn tree_heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.roots.len()];
        for v in 0..self.node_count() {
            let t = self.tree_of[v];
            h[t] = h[t].max(self.depth[v] as usize + 1);
        }
        h
    }
}

/// Per-tree summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeStats {
    pub root: NodeId,
    pub nodes: usize,
    pub height: usize,
    pub width: usize,
}

/// Elimination result: order, bags and the hierarchy built from them.
#[derive(Debug, Clone)]
pub struct TreeDecomposition {
    elimination_order: Vec<NodeId>,
    bags: Vec<Vec<NodeId>>,
    hierarchy: VertexHierarchy,
}

impl TreeDecomposition {
    /// Eliminated nodes, first eliminated first.
    pub fn elimination_order(&self) -> &[NodeId] {
        &self.elimination_order
    }

    /// Sorted bag of `v`: `v` plus its neighbors at elimination time.
    pub fn bag(&self, v: NodeId) -> &[NodeId] {
        &self.bags[v]
    }

    pub fn hierarchy(&self) -> &VertexHierarchy {
        &self.hierarchy
    }

    pub fn into_hierarchy(self) -> VertexHierarchy {
        self.hierarchy
    }

    /// Width estimate: largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn height(&self) -> usize {
        self.hierarchy.height()
    }

    pub fn tree_stats(&self) -> Vec<TreeStats> {
        let h = &self.hierarchy;
        let heights = h.tree_heights();
        let mut stats: Vec<TreeStats> = h
            .roots()
            .iter()
            .zip(heights)
            .map(|(&root, height)| TreeStats { root, nodes: 0, height, width: 0 })
            .collect();
        for v in 0..h.node_count() {
            let s = &mut stats[h.tree_of(v)];
            s.nodes += 1;
            s.width = s.width.max(self.bags[v].len() - 1);
        }
        stats
    }
}

/// Minimum-degree elimination over the whole graph. Disconnected inputs
/// produce a forest with one root per component.
pub fn mde_decompose(g: &Graph) -> TreeDecomposition {
    let n = g.node_count();
    let mut adj: Vec<HashSet<NodeId>> =
        (0..n).map(|u| g.neighbors(u).iter().map(|a| a.node).collect()).collect();
    let mut degree: Vec<usize> = adj.iter().map(HashSet::len).collect();
    let mut queue: BTreeSet<(usize, NodeId)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut elim_index = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = vec![Vec::new(); n];

    while let Some((_, v)) = queue.pop_first() {
        elim_index[v] = order.len();
        order.push(v);
        let mut nbrs: Vec<NodeId> = adj[v].drain().collect();
        nbrs.sort_unstable();
        for &x in &nbrs {
            adj[x].remove(&v);
        }
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                }
            }
        }
        for &x in &nbrs {
            let d = adj[x].len();
            if d != degree[x] {
                queue.remove(&(degree[x], x));
                degree[x] = d;
                queue.insert((d, x));
            }
        }
        let pos = nbrs.partition_point(|&x| x < v);
        nbrs.insert(pos, v);
        bags[v] = nbrs;
    }

    let parent: Vec<NodeId> = (0..n)
        .map(|v| {
            bags[v]
                .iter()
                .filter(|&&x| x != v)
                .min_by_key(|&&x| elim_index[x])
                .copied()
                .unwrap_or(NO_PARENT)
        })
        .collect();
    let hierarchy = dfs_annotate(parent).expect("elimination parents always form a forest");
    TreeDecomposition { elimination_order: order, bags, hierarchy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn star_eliminates_leaves_first() {
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let td = mde_decompose(&g);
        // After two leaves go, the center ties with leaf 3 and wins on id.
        assert_eq!(td.elimination_order(), &[1, 2, 0, 3]);
        assert_eq!(td.hierarchy().roots(), &[3]);
        assert_eq!(td.hierarchy().parents(), &[3, 0, 0, NO_PARENT]);
        assert_eq!(td.height(), 3);
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn path_starts_at_endpoint() {
        let g = generators::path(4);
        let td = mde_decompose(&g);
        assert_eq!(td.elimination_order()[0], 0);
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn example_graph_shape() {
        let g = generators::nine_node_example();
        let td = mde_decompose(&g);
        assert_eq!(td.width(), 2);
        assert_eq!(td.height(), 6);
        let h = td.hierarchy();
        // vk has id k-1.
        assert_eq!(td.elimination_order(), &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(h.parents(), &[1, 2, 6, 5, 5, 7, 7, 8, NO_PARENT]);
        assert_eq!(h.roots(), &[8]);
        assert!(h.is_ancestor(7, 3));
        assert_eq!(h.dfs_orders(), &[8, 7, 6, 3, 4, 2, 5, 1, 0]);
    }

    #[test]
    fn root_only_tree() {
        let h = dfs_annotate(vec![NO_PARENT]).unwrap();
        assert_eq!(h.dfs_order(0), 0);
        assert_eq!(h.subtree_size(0), 1);
        assert_eq!(h.depth(0), 0);
    }

    #[test]
    fn chain_annotation() {
        // root 0 -> 1 -> 2
        let h = dfs_annotate(vec![NO_PARENT, 0, 1]).unwrap();
        assert_eq!(h.subtree_sizes(), &[3, 2, 1]);
        assert_eq!(h.depths(), &[0, 1, 2]);
        assert!(h.is_ancestor(0, 2));
        assert!(h.is_ancestor(2, 2));
        assert!(!h.is_ancestor(2, 0));
    }

    #[test]
    fn children_visited_in_id_order() {
        let h = dfs_annotate(vec![NO_PARENT, 0, 0, 1]).unwrap();
        assert_eq!((0..4).map(|p| h.node_at(p)).collect::<Vec<_>>(), vec![0, 1, 3, 2]);
    }

    #[test]
    fn cycles_rejected() {
        assert_eq!(
            dfs_annotate(vec![NO_PARENT, 2, 1]).unwrap_err(),
            TreeError::CycleDetected { visited: 1, n: 3 }
        );
        assert_eq!(dfs_annotate(vec![5]).unwrap_err(), TreeError::InvalidParent(0, 5));
    }

    #[test]
    fn forest_for_disconnected_input() {
        let g = Graph::from_edges(5, &[(0, 1, 1.0), (2, 3, 1.0), (3, 4, 1.0)]).unwrap();
        let td = mde_decompose(&g);
        let h = td.hierarchy();
        assert_eq!(h.roots().len(), 2);
        assert_eq!(h.lca(0, 3), None);
        assert_eq!(td.tree_stats().iter().map(|s| s.nodes).sum::<usize>(), 5);
    }
}
