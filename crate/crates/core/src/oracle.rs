//! Dense reference formulations of resistance distance.
//!
//! Everything here is O(n³) Gaussian elimination on explicit matrices and is
//! only meant for small graphs: it is the ground truth the labelling and the
//! flow routines are checked against.

use std::collections::VecDeque;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::graph::{Graph, NodeId};

/// Largest node count the dense routines accept.
pub const SIZE_GUARD: usize = 2048;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {n} nodes, dense oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("zero pivot while eliminating node {0}")]
    ZeroPivot(NodeId),
    #[error("nodes {0} and {1} are not separated by the cut")]
    NotSeparated(NodeId, NodeId),
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)];
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `x^T M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self, OracleError> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let tol = 1e-12 * self.max_abs().max(1.0);
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
                .ok_or(OracleError::Singular)?;
            if a[(pivot_row, col)].abs() <= tol {
                return Err(OracleError::Singular);
            }
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.data[r * n + j] -= f * a.data[col * n + j];
                    inv.data[r * n + j] -= f * inv.data[col * n + j];
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &x in set {
        mark[x] = true;
    }
    (0..n).filter(|&i| !mark[i]).collect()
}

fn unit_difference(n: usize, s: usize, t: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[s] += 1.0;
    x[t] -= 1.0;
    x
}

/// Dense Laplacian `D - A` with conductances as weights.
pub fn dense_laplacian(g: &Graph) -> Result<DenseMatrix, OracleError> {
    let n = g.node_count();
    if n > SIZE_GUARD {
        return Err(OracleError::TooLarge { n, limit: SIZE_GUARD });
    }
    let mut l = DenseMatrix::zeros(n, n);
    for (u, v, c) in g.edges() {
        l[(u, v)] -= c;
        l[(v, u)] -= c;
        l[(u, u)] += c;
        l[(v, v)] += c;
    }
    Ok(l)
}

/// Inverse of `L` with the `remove` rows/columns deleted, embedded back into
/// an `n x n` matrix with zeros at the removed indices.
pub fn submatrix_inverse(l: &DenseMatrix, remove: &[usize]) -> Result<DenseMatrix, OracleError> {
    let n = l.rows();
    let keep = complement(n, remove);
    let inv = l.submatrix(&keep, &keep).inverse()?;
    let mut out = DenseMatrix::zeros(n, n);
    for (i, &r) in keep.iter().enumerate() {
        for (j, &c) in keep.iter().enumerate() {
            out[(r, c)] = inv[(i, j)];
        }
    }
    Ok(out)
}

/// `M_KK - M_KU M_UU^{-1} M_UK` for `K = keep` (in the given order).
pub fn schur_complement(m: &DenseMatrix, keep: &[usize]) -> Result<DenseMatrix, OracleError> {
    let rest = complement(m.rows(), keep);
    let kk = m.submatrix(keep, keep);
    if rest.is_empty() {
        return Ok(kk);
    }
    let uu_inv = m.submatrix(&rest, &rest).inverse()?;
    let ku = m.submatrix(keep, &rest);
    let uk = m.submatrix(&rest, keep);
    let correction = ku.mul(&uu_inv).mul(&uk);
    let mut out = kk;
    for (o, c) in out.data.iter_mut().zip(&correction.data) {
        *o -= c;
    }
    Ok(out)
}

/// Laplacian pseudo-inverse of a connected graph via `(L + J/n)^{-1} - J/n`.
pub fn pseudo_inverse(l: &DenseMatrix) -> Result<DenseMatrix, OracleError> {
    let n = l.rows();
    let j = 1.0 / n as f64;
    let mut shifted = l.clone();
    shifted.data.iter_mut().for_each(|x| *x += j);
    let mut inv = shifted.inverse()?;
    inv.data.iter_mut().for_each(|x| *x -= j);
    Ok(inv)
}

/// `(e_s - e_t)^T L^† (e_s - e_t)`.
pub fn pseudo_inverse_resistance(l: &DenseMatrix, s: usize, t: usize) -> Result<f64, OracleError> {
    let pinv = pseudo_inverse(l)?;
    Ok(pinv.quadratic_form(&unit_difference(l.rows(), s, t)))
}

/// Resistance from the grounded inverse `L_v^{-1}`; `s` or `t` may be `v`.
pub fn grounded_resistance(l: &DenseMatrix, ground: usize, s: usize, t: usize) -> Result<f64, OracleError> {
    let inv = submatrix_inverse(l, &[ground])?;
    Ok(inv.quadratic_form(&unit_difference(l.rows(), s, t)))
}

/// Resistance through a partition of the nodes into `inner` (U) and its
/// complement (V), evaluating whichever of the three block formulas applies:
/// both endpoints in U, one in each, or both in V.
pub fn partition_resistance(l: &DenseMatrix, inner: &[usize], s: usize, t: usize) -> Result<f64, OracleError> {
    let n = l.rows();
    let outer = complement(n, inner);
    let pos_inner = |x: usize| inner.iter().position(|&y| y == x);
    let pos_outer = |x: usize| outer.iter().position(|&y| y == x);

    let uu_inv = l.submatrix(inner, inner).inverse()?;
    // p_u rows: -L_UU^{-1} L_UV, nonnegative hitting probabilities.
    let mut p = uu_inv.mul(&l.submatrix(inner, &outer));
    p.data.iter_mut().for_each(|x| *x = -*x);
    let schur_pinv = pseudo_inverse(&schur_complement(l, &outer)?)?;
    let k = outer.len();

    let outer_vec = |x: usize| -> Vec<f64> {
        match pos_inner(x) {
            Some(i) => p.row(i).to_vec(),
            None => {
                let mut e = vec![0.0; k];
                e[pos_outer(x).expect("node is in one side")] = 1.0;
                e
            }
        }
    };
    let diff: Vec<f64> = outer_vec(s).iter().zip(outer_vec(t)).map(|(a, b)| a - b).collect();
    let schur_part = schur_pinv.quadratic_form(&diff);

    let mut inner_vec = vec![0.0; inner.len()];
    if let Some(i) = pos_inner(s) {
        inner_vec[i] += 1.0;
    }
    if let Some(i) = pos_inner(t) {
        inner_vec[i] -= 1.0;
    }
    Ok(uu_inv.quadratic_form(&inner_vec) + schur_part)
}

/// Applies `S <- S - S[:,v] S[:,v]^T / S[v,v]` for each `v` in order.
pub fn gaussian_eliminate_inverse(m: &DenseMatrix, eliminate: &[usize]) -> Result<DenseMatrix, OracleError> {
    let mut s = m.clone();
    let n = s.rows();
    for &v in eliminate {
        let pivot = s[(v, v)];
        if pivot.abs() <= 1e-14 {
            return Err(OracleError::ZeroPivot(v));
        }
        let col = s.column(v);
        for i in 0..n {
            if col[i] == 0.0 {
                continue;
            }
            let f = col[i] / pivot;
            for j in 0..n {
                s.data[i * n + j] -= f * col[j];
            }
        }
        // Exact zeros in the eliminated row/column.
        for i in 0..n {
            s[(i, v)] = 0.0;
            s[(v, i)] = 0.0;
        }
    }
    Ok(s)
}

/// One grounded node per component: the largest id in each.
pub fn component_grounds(g: &Graph) -> Vec<NodeId> {
    let mut ground = vec![0; g.component_count()];
    for u in 0..g.node_count() {
        ground[g.component_id(u)] = u;
    }
    ground
}

/// All-pairs resistances with `f64::INFINITY` across components.
pub fn resistance_matrix(g: &Graph) -> Result<DenseMatrix, OracleError> {
    let l = dense_laplacian(g)?;
    let inv = submatrix_inverse(&l, &component_grounds(g))?;
    let n = g.node_count();
    let mut r = DenseMatrix::zeros(n, n);
    for s in 0..n {
        for t in 0..n {
            r[(s, t)] = if g.component_id(s) != g.component_id(t) {
                f64::INFINITY
            } else {
                inv[(s, s)] + inv[(t, t)] - 2.0 * inv[(s, t)]
            };
        }
    }
    Ok(r)
}

/// Reference unit `s -> t` electrical flow as `(u, v, flow)` with `u < v`,
/// positive when current runs from `u` to `v`.
pub fn electrical_flow_reference(g: &Graph, s: NodeId, t: NodeId) -> Result<Vec<(NodeId, NodeId, f64)>, OracleError> {
    if g.component_id(s) != g.component_id(t) {
        return Err(OracleError::Singular);
    }
    let l = dense_laplacian(g)?;
    let inv = submatrix_inverse(&l, &component_grounds(g))?;
    let x = inv.mul_vec(&unit_difference(g.node_count(), s, t));
    Ok(g.edges().map(|(u, v, c)| (u, v, (x[u] - x[v]) * c)).collect())
}

/// Keeps `side` and merges every other node into one super node, which gets
/// id `side.len()`. Edges inside the merged set vanish; parallel edges into
/// the super node are merged by summing conductances.
pub fn contraction_graph(g: &Graph, side: &[NodeId]) -> Graph {
    let mut map = vec![side.len(); g.node_count()];
    for (i, &v) in side.iter().enumerate() {
        map[v] = i;
    }
    let edges: Vec<_> = g
        .edges()
        .map(|(u, v, c)| (map[u], map[v], c))
        .filter(|&(a, b, _)| a != b)
        .collect();
    Graph::from_edges(side.len() + 1, &edges).expect("contracted edges are valid")
}

/// Both sides of the cut-vertex-set identity
/// `r(s,t) = r_{G1}(s, Δ1) + r_{G2}(t, Δ2) + Σ_{v∈cut} (S[v,s]-S[v,t])² / S[v,v]`.
#[derive(Debug, Clone, Copy)]
pub struct CutIdentity {
    pub direct: f64,
    pub side_s: f64,
    pub side_t: f64,
    pub cut_term: f64,
}

impl CutIdentity {
    pub fn recombined(&self) -> f64 {
        self.side_s + self.side_t + self.cut_term
    }
}

/// Evaluates the cut identity for a connected graph. The last cut node is
/// the ground; the others are eliminated from `L_ground^{-1}` in order.
pub fn cut_identity(g: &Graph, cut: &[NodeId], s: NodeId, t: NodeId) -> Result<CutIdentity, OracleError> {
    let n = g.node_count();
    let mut blocked = vec![false; n];
    for &v in cut {
        blocked[v] = true;
    }
    let side_of = |start: NodeId| -> Vec<NodeId> {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for a in g.neighbors(u) {
                if !blocked[a.node] && !seen[a.node] {
                    seen[a.node] = true;
                    queue.push_back(a.node);
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    };
    let (&ground, eliminated) = cut.split_last().ok_or(OracleError::NotSeparated(s, t))?;
    if blocked[s] || blocked[t] {
        return Err(OracleError::NotSeparated(s, t));
    }
    let side1 = side_of(s);
    if side1.contains(&t) {
        return Err(OracleError::NotSeparated(s, t));
    }
    let side2 = side_of(t);

    let l = dense_laplacian(g)?;
    let direct = pseudo_inverse_resistance(&l, s, t)?;

    let mut m = submatrix_inverse(&l, &[ground])?;
    let mut cut_term = 0.0;
    for &v in eliminated {
        let pivot = m[(v, v)];
        let d = m[(v, s)] - m[(v, t)];
        cut_term += d * d / pivot;
        m = gaussian_eliminate_inverse(&m, &[v])?;
    }

    let contracted_resistance = |side: &[NodeId], x: NodeId| -> Result<f64, OracleError> {
        let h = contraction_graph(g, side);
        let local = side.iter().position(|&y| y == x).expect("endpoint in its side");
        pseudo_inverse_resistance(&dense_laplacian(&h)?, local, side.len())
    };
    Ok(CutIdentity {
        direct,
        side_s: contracted_resistance(&side1, s)?,
        side_t: contracted_resistance(&side2, t)?,
        cut_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn laplacian_of_example_matches_reference() {
        // Reference rows, with the v4 row and the v5-v4 cell consistent with the edge list.
        let l = dense_laplacian(&generators::nine_node_example()).unwrap();
        let expected: [[f64; 9]; 9] = [
            [1., -1., 0., 0., 0., 0., 0., 0., 0.],
            [-1., 3., -1., 0., 0., 0., 0., 0., -1.],
            [0., -1., 3., 0., 0., 0., -1., 0., -1.],
            [0., 0., 0., 2., 0., -1., 0., -1., 0.],
            [0., 0., 0., 0., 2., -1., 0., 0., -1.],
            [0., 0., 0., -1., -1., 2., 0., 0., 0.],
            [0., 0., -1., 0., 0., 0., 3., -1., -1.],
            [0., 0., 0., -1., 0., 0., -1., 3., -1.],
            [0., -1., -1., 0., -1., 0., -1., -1., 5.],
        ];
        let rows: Vec<&[f64]> = expected.iter().map(|r| r.as_slice()).collect();
        assert_eq!(l, DenseMatrix::from_rows(&rows));
    }

    #[test]
    fn small_laplacians() {
        let l = dense_laplacian(&generators::path(2)).unwrap();
        assert_eq!(l, DenseMatrix::from_rows(&[&[1., -1.], &[-1., 1.]]));
        let l = dense_laplacian(&Graph::from_edges(2, &[(0, 1, 2.0)]).unwrap()).unwrap();
        assert_eq!(l, DenseMatrix::from_rows(&[&[2., -2.], &[-2., 2.]]));
    }

    #[test]
    fn size_guard() {
        let g = generators::path(SIZE_GUARD + 1);
        assert!(matches!(dense_laplacian(&g), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn grounded_inverse_matches_reference_entries() {
        let l = dense_laplacian(&generators::nine_node_example()).unwrap();
        let inv = submatrix_inverse(&l, &[8]).unwrap();
        assert!(close(inv[(0, 0)], 1.62, 0.005));
        assert!(close(inv[(7, 3)], 0.40, 0.005));
        assert!(close(inv[(7, 7)], 0.54, 0.005));
        assert!(close(inv[(7, 1)], 0.04, 0.005));
        assert_eq!(inv[(8, 8)], 0.0);
        let inv2 = submatrix_inverse(&l, &[7, 8]).unwrap();
        assert!(close(inv2[(6, 6)], 0.38, 0.005));
        assert!(close(inv2[(6, 1)], 0.08, 0.005));
        assert_eq!(inv2[(6, 3)], 0.0);
    }

    #[test]
    fn path_inverse() {
        let l = dense_laplacian(&generators::path(2)).unwrap();
        let inv = submatrix_inverse(&l, &[1]).unwrap();
        assert_eq!(inv[(0, 0)], 1.0);
    }

    #[test]
    fn schur_edge_cases() {
        let l = dense_laplacian(&generators::nine_node_example()).unwrap();
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(schur_complement(&l, &all).unwrap(), l);
        let single = schur_complement(&l, &[4]).unwrap();
        assert!(single[(0, 0)].abs() < 1e-12);
    }

    #[test]
    fn schur_pinv_matches_reference() {
        let l = dense_laplacian(&generators::nine_node_example()).unwrap();
        let s = schur_complement(&l, &[6, 7, 8]).unwrap();
        let p = pseudo_inverse(&s).unwrap();
        assert!(close(p[(0, 0)], 0.17, 0.005));
        assert!(close(p[(0, 1)], -0.11, 0.005));
        assert!(close(p[(1, 1)], 0.20, 0.005));
        assert!(close(p[(2, 2)], 0.16, 0.005));
    }

    #[test]
    fn resistance_formulations_on_example() {
        let l = dense_laplacian(&generators::nine_node_example()).unwrap();
        assert!(close(pseudo_inverse_resistance(&l, 1, 3).unwrap(), 1.61, 0.005));
        assert!(close(grounded_resistance(&l, 8, 0, 8).unwrap(), 1.62, 0.005));
        let inner: Vec<usize> = (0..6).collect();
        assert!(close(partition_resistance(&l, &inner, 1, 3).unwrap(), 1.61, 0.005));
        assert!(partition_resistance(&l, &inner, 2, 2).unwrap().abs() < 1e-12);
        assert!(partition_resistance(&l, &inner, 7, 7).unwrap().abs() < 1e-12);
    }

    #[test]
    fn triangle_and_disconnected() {
        let l = dense_laplacian(&generators::cycle(3)).unwrap();
        assert!(close(pseudo_inverse_resistance(&l, 0, 1).unwrap(), 2.0 / 3.0, 1e-12));
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let l = dense_laplacian(&g).unwrap();
        assert_eq!(pseudo_inverse_resistance(&l, 0, 1), Err(OracleError::Singular));
    }

    #[test]
    fn elimination_from_grounded_inverse() {
        let l = dense_laplacian(&generators::nine_node_example()).unwrap();
        let s0 = submatrix_inverse(&l, &[8]).unwrap();
        assert_eq!(gaussian_eliminate_inverse(&s0, &[]).unwrap(), s0);
        let s1 = gaussian_eliminate_inverse(&s0, &[7]).unwrap();
        assert!(close(s1[(6, 6)], 0.38, 0.005));
        let direct = submatrix_inverse(&l, &[7, 8]).unwrap();
        assert!(s1.max_abs_diff(&direct) < 1e-12);
        let a = gaussian_eliminate_inverse(&s0, &[7, 6, 2]).unwrap();
        let b = gaussian_eliminate_inverse(&s0, &[2, 7, 6]).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-9);
        assert!(matches!(gaussian_eliminate_inverse(&s1, &[7]), Err(OracleError::ZeroPivot(7))));
    }

    #[test]
    fn reference_flow_on_example() {
        let g = generators::nine_node_example();
        let f = electrical_flow_reference(&g, 1, 3).unwrap();
        let get = |a: usize, b: usize| {
            let (u, v, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
            sign * f.iter().find(|e| e.0 == u && e.1 == v).unwrap().2
        };
        assert!(close(get(1, 8), 0.59, 0.005));
        assert!(close(get(8, 7), 0.36, 0.005));
        assert!(close(get(7, 3), 0.66, 0.005));
        let mut net = [0.0; 9];
        for &(u, v, x) in &f {
            net[u] += x;
            net[v] -= x;
        }
        for (i, x) in net.iter().enumerate() {
            let expected = match i {
                1 => 1.0,
                3 => -1.0,
                _ => 0.0,
            };
            assert!(close(*x, expected, 1e-9));
        }
        let single = electrical_flow_reference(&generators::path(2), 0, 1).unwrap();
        assert!(close(single[0].2, 1.0, 1e-12));
    }

    #[test]
    fn cut_identity_on_example() {
        let g = generators::nine_node_example();
        let c = cut_identity(&g, &[6, 7, 8], 1, 3).unwrap();
        assert!(close(c.direct, 1.61, 0.005));
        assert!(close(c.recombined(), c.direct, 1e-9));
        assert!(matches!(cut_identity(&g, &[8], 1, 3), Err(OracleError::NotSeparated(1, 3))));
    }

    #[test]
    fn nested_inverse_is_schur_of_inverse() {
        let g = generators::connected_erdos_renyi(20, 0.2, true, 11);
        let l = dense_laplacian(&g).unwrap();
        let big = submatrix_inverse(&l, &[19]).unwrap();
        let keep: Vec<usize> = (0..12).collect();
        let small = submatrix_inverse(&l, &(12..20).collect::<Vec<_>>()).unwrap();
        // Schur complement of the U2 block of big onto U1 = keep.
        let u2: Vec<usize> = (0..19).collect();
        let block = big.submatrix(&u2, &u2);
        let s = schur_complement(&block, &keep).unwrap();
        assert!(s.max_abs_diff(&small.submatrix(&keep, &keep)) < 1e-9);
    }
}
