//! Immutable sparse graphs, truncated breadth-first search, and the
//! distance-`ℓ` (`D^ℓ`), path-expansion (`B^ℓ`) and difference (`Δ^ℓ`) matrices.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Undirected simple graph in compressed adjacency form.
///
/// Neighbour lists are strictly sorted; there are no self-loops and every edge
/// appears in both endpoint lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseGraph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl SparseGraph {
    pub fn empty(n: usize) -> Self {
        SparseGraph {
            n,
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in adj {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Ok(SparseGraph { n, offsets, targets })
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Self {
        Self::from_edges(k + 1, (1..=k).map(|v| (0, v))).expect("valid star")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("valid clique")
    }

    /// Complete `arity`-ary tree of the given depth, root 0, breadth-first numbering.
    pub fn complete_tree(arity: usize, depth: usize) -> Self {
        let mut edges = Vec::new();
        let mut level_start = 0;
        let mut level_len = 1;
        let mut next = 1;
        for _ in 0..depth {
            for parent in level_start..level_start + level_len {
                for _ in 0..arity {
                    edges.push((parent, next));
                    next += 1;
                }
            }
            level_start += level_len;
            level_len *= arity;
        }
        Self::from_edges(next, edges).expect("valid tree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edge list with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .copied()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    /// Distance layers from `sources` out to `radius` (multi-source when
    /// `sources` has several vertices). Always returns `radius + 1` layers.
    pub fn layers(&self, sources: &[usize], radius: usize) -> Vec<Vec<usize>> {
        let mut scratch = BfsScratch::new(self.n);
        scratch.run(self, sources, radius)
    }
}

/// Reusable state for repeated truncated BFS passes. Only the vertices
/// touched by the last pass are reset, so a pass costs `O(ball)` rather than
/// `O(n)`.
#[derive(Clone, Debug)]
pub struct BfsScratch {
    dist: Vec<u32>,
    touched: Vec<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch {
            dist: vec![UNSEEN; n],
            touched: Vec::new(),
        }
    }

    fn clear(&mut self) {
        for &v in &self.touched {
            self.dist[v] = UNSEEN;
        }
        self.touched.clear();
    }

    /// Runs a BFS and returns its layers. Distances stay queryable through
    /// [`BfsScratch::dist`] until the next call.
    pub fn run(&mut self, g: &SparseGraph, sources: &[usize], radius: usize) -> Vec<Vec<usize>> {
        self.clear();
        let mut layers = Vec::with_capacity(radius + 1);
        let mut first = Vec::with_capacity(sources.len());
        for &s in sources {
            if self.dist[s] == UNSEEN {
                self.dist[s] = 0;
                self.touched.push(s);
                first.push(s);
            }
        }
        layers.push(first);
        for t in 1..=radius {
            let mut next = Vec::new();
            for &u in &layers[t - 1] {
                for &w in g.neighbors(u) {
                    if self.dist[w] == UNSEEN {
                        self.dist[w] = t as u32;
                        self.touched.push(w);
                        next.push(w);
                    }
                }
            }
            layers.push(next);
        }
        layers
    }

    pub fn dist(&self, v: usize) -> Option<usize> {
        match self.dist[v] {
            UNSEEN => None,
            d => Some(d as usize),
        }
    }
}

/// Distance shells `𝓨_t(v)` of one vertex, with optional per-type counts.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellProfile {
    pub vertex: usize,
    pub shells: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
    /// `type_counts[t][i]` = number of type-`i` vertices at distance `t`.
    pub type_counts: Option<Vec<Vec<usize>>>,
}

/// Shells of `v` out to `ell`. When `types = Some((sigma, r))` the per-type
/// counts `Y_t(v)` are filled in as well.
pub fn bfs_shells(
    g: &SparseGraph,
    v: usize,
    ell: usize,
    types: Option<(&[usize], usize)>,
) -> ShellProfile {
    let mut shells = g.layers(&[v], ell);
    for s in &mut shells {
        s.sort_unstable();
    }
    let sizes = shells.iter().map(Vec::len).collect();
    let type_counts = types.map(|(sigma, r)| {
        shells
            .iter()
            .map(|shell| {
                let mut counts = vec![0usize; r];
                for &w in shell {
                    counts[sigma[w]] += 1;
                }
                counts
            })
            .collect()
    });
    ShellProfile {
        vertex: v,
        shells,
        sizes,
        type_counts,
    }
}

/// What a [`SparseSymMatrix`] represents; used in dumps and diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    Adjacency,
    Distance,
    PathExpansion,
    Delta,
    Other,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Distance => "distance",
            MatrixKind::PathExpansion => "path",
            MatrixKind::Delta => "delta",
            MatrixKind::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "adjacency" => MatrixKind::Adjacency,
            "distance" => MatrixKind::Distance,
            "path" => MatrixKind::PathExpansion,
            "delta" => MatrixKind::Delta,
            "other" => MatrixKind::Other,
            _ => return None,
        })
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Symmetric sparse matrix with small non-negative integer entries.
///
/// Both triangles are stored so that rows can be processed independently in
/// the matvec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSymMatrix {
    n: usize,
    ell: usize,
    kind: MatrixKind,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<u32>,
}

impl SparseSymMatrix {
    /// Assembles a matrix from per-row `(column, value)` lists. Rows are
    /// sorted here and zero values dropped; symmetry is the caller's contract
    /// and is checked in debug builds.
    pub fn from_rows(n: usize, ell: usize, kind: MatrixKind, rows: Vec<Vec<(usize, u32)>>) -> Self {
        let m = Self::from_rows_unchecked(n, ell, kind, rows);
        debug_assert!(m.is_symmetric());
        m
    }

    /// Like [`SparseSymMatrix::from_rows`] but leaves the symmetry check to the caller.
    pub(crate) fn from_rows_unchecked(n: usize, ell: usize, kind: MatrixKind, rows: Vec<Vec<(usize, u32)>>) -> Self {
        assert_eq!(rows.len(), n, "one row per vertex");
        let mut offsets = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(c, _)| c);
            for (c, v) in row {
                if v != 0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            offsets.push(cols.len());
        }
        SparseSymMatrix {
            n,
            ell,
            kind,
            offsets,
            cols,
            vals,
        }
    }

    /// Adjacency matrix of `g`.
    pub fn adjacency(g: &SparseGraph) -> Self {
        let rows = (0..g.n())
            .map(|u| g.neighbors(u).iter().map(|&v| (v, 1)).collect())
            .collect();
        Self::from_rows(g.n(), 1, MatrixKind::Adjacency, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Stored nonzeros (both triangles).
    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[u32]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|k| vals[k]).unwrap_or(0)
    }

    pub fn max_value(&self) -> u32 {
        self.vals.iter().copied().max().unwrap_or(0)
    }

    /// Nonzero entries `(i, j, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries().all(|(i, j, v)| self.get(j, i) == v)
    }

    /// `y = A x`; rows are evaluated in parallel with a fixed summation order.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let (cols, vals) = self.row(i);
            *yi = cols
                .iter()
                .zip(vals)
                .map(|(&j, &v)| f64::from(v) * x[j])
                .sum();
        });
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.entries()
            .map(|(i, j, v)| x[i] * f64::from(v) * x[j])
            .sum()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.entries() {
            m[(i, j)] = f64::from(v);
        }
        m
    }

    /// Entrywise `|self - other|`.
    pub fn abs_diff(&self, other: &SparseSymMatrix) -> Result<SparseSymMatrix> {
        if self.n != other.n {
            return Err(Error::Incompatible(format!(
                "dimensions {} and {}",
                self.n, other.n
            )));
        }
        let rows = (0..self.n)
            .map(|i| merge_rows(self.row(i), other.row(i), |a, b| a.abs_diff(b)))
            .collect();
        Ok(Self::from_rows(self.n, self.ell, MatrixKind::Other, rows))
    }
}

fn merge_rows(
    (ca, va): (&[usize], &[u32]),
    (cb, vb): (&[usize], &[u32]),
    op: impl Fn(u32, u32) -> u32,
) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(ca.len().max(cb.len()));
    let (mut p, mut q) = (0, 0);
    while p < ca.len() || q < cb.len() {
        let (c, a, b) = match (ca.get(p), cb.get(q)) {
            (Some(&x), Some(&y)) if x == y => {
                p += 1;
                q += 1;
                (x, va[p - 1], vb[q - 1])
            }
            (Some(&x), Some(&y)) if x < y => {
                p += 1;
                (x, va[p - 1], 0)
            }
            (Some(&x), None) => {
                p += 1;
                (x, va[p - 1], 0)
            }
            (_, Some(&y)) => {
                q += 1;
                (y, 0, vb[q - 1])
            }
            (None, None) => unreachable!(),
        };
        let v = op(a, b);
        if v != 0 {
            out.push((c, v));
        }
    }
    out
}

/// `D^ℓ`: entry `(i, j)` is 1 iff the graph distance between `i` and `j` is
/// exactly `ell`. One truncated BFS per vertex, so the cost is the total size
/// of the radius-`ell` balls.
pub fn distance_matrix(g: &SparseGraph, ell: usize) -> SparseSymMatrix {
    let n = g.n();
    let rows: Vec<Vec<(usize, u32)>> = (0..n)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, v| {
                let mut layers = scratch.run(g, &[v], ell);
                let last = layers.pop().unwrap_or_default();
                last.into_iter().map(|w| (w, 1)).collect()
            },
        )
        .collect();
    SparseSymMatrix::from_rows(n, ell, MatrixKind::Distance, rows)
}

/// `B^ℓ` together with the pairs whose count exceeded the cap.
#[derive(Clone, Debug)]
pub struct PathExpansion {
    pub matrix: SparseSymMatrix,
    /// Pairs `(i, j)`, `i < j`, whose true count is larger than `cap`.
    pub saturated: Vec<(usize, usize)>,
    pub cap: u32,
}

/// `B^ℓ`: number of self-avoiding walks of length exactly `ell` between each
/// pair, counted by depth-limited DFS with on-path marking and saturated at
/// `cap`.
pub fn path_expansion_matrix(g: &SparseGraph, ell: usize, cap: u32) -> PathExpansion {
    assert!(cap >= 1, "cap must be positive");
    let n = g.n();
    struct Scratch {
        on_path: Vec<bool>,
        counts: Vec<u32>,
        overflow: Vec<bool>,
        touched: Vec<usize>,
    }
    fn walk(g: &SparseGraph, u: usize, remaining: usize, cap: u32, s: &mut Scratch) {
        if remaining == 0 {
            if s.counts[u] == 0 && !s.overflow[u] {
                s.touched.push(u);
            }
            if s.counts[u] < cap {
                s.counts[u] += 1;
            } else {
                s.overflow[u] = true;
            }
            return;
        }
        for &w in g.neighbors(u) {
            if !s.on_path[w] {
                s.on_path[w] = true;
                walk(g, w, remaining - 1, cap, s);
                s.on_path[w] = false;
            }
        }
    }
    // (row entries, columns whose count hit the cap)
    type Row = (Vec<(usize, u32)>, Vec<usize>);
    let per_row: Vec<Row> = (0..n)
        .into_par_iter()
        .map_init(
            || Scratch {
                on_path: vec![false; n],
                counts: vec![0; n],
                overflow: vec![false; n],
                touched: Vec::new(),
            },
            |s, i| {
                if ell == 0 {
                    return (vec![(i, 1)], Vec::new());
                }
                s.on_path[i] = true;
                walk(g, i, ell, cap, s);
                s.on_path[i] = false;
                let mut row = Vec::with_capacity(s.touched.len());
                let mut sat = Vec::new();
                for &j in &s.touched {
                    row.push((j, s.counts[j]));
                    if s.overflow[j] && i < j {
                        sat.push(j);
                    }
                    s.counts[j] = 0;
                    s.overflow[j] = false;
                }
                s.touched.clear();
                (row, sat)
            },
        )
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut saturated = Vec::new();
    for (i, (row, sat)) in per_row.into_iter().enumerate() {
        rows.push(row);
        saturated.extend(sat.into_iter().map(|j| (i, j)));
    }
    saturated.sort_unstable();
    PathExpansion {
        matrix: SparseSymMatrix::from_rows(n, ell, MatrixKind::PathExpansion, rows),
        saturated,
        cap,
    }
}

/// `Δ^ℓ = B^ℓ − D^ℓ`. Fails with [`Error::NegativeEntry`] when `D^ℓ` is set
/// where `B^ℓ` is zero, which can only happen for mismatched inputs.
pub fn delta_matrix(bl: &SparseSymMatrix, dl: &SparseSymMatrix) -> Result<SparseSymMatrix> {
    if bl.n() != dl.n() || bl.ell() != dl.ell() {
        return Err(Error::Incompatible(format!(
            "B has (n={}, ell={}), D has (n={}, ell={})",
            bl.n(),
            bl.ell(),
            dl.n(),
            dl.ell()
        )));
    }
    let mut rows = Vec::with_capacity(bl.n());
    for i in 0..bl.n() {
        let (dc, dv) = dl.row(i);
        for (&j, &d) in dc.iter().zip(dv) {
            if bl.get(i, j) < d {
                return Err(Error::NegativeEntry { i, j });
            }
        }
        rows.push(merge_rows(bl.row(i), dl.row(i), |b, d| b - d));
    }
    Ok(SparseSymMatrix::from_rows(
        bl.n(),
        bl.ell(),
        MatrixKind::Delta,
        rows,
    ))
}

/// Result of [`tangle_free_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleReport {
    pub tangle_free: bool,
    /// Vertices whose radius-`ell` ball holds more than one independent cycle.
    pub offending: Vec<usize>,
    pub max_excess: usize,
}

/// Checks that every radius-`ell` ball has cycle rank (edges − vertices + 1
/// on the induced subgraph) at most one.
pub fn tangle_free_check(g: &SparseGraph, ell: usize) -> TangleReport {
    let n = g.n();
    let excess: Vec<usize> = (0..n)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, v| {
                let layers = scratch.run(g, &[v], ell);
                let mut vertices = 0usize;
                let mut half_edges = 0usize;
                for &u in layers.iter().flatten() {
                    vertices += 1;
                    half_edges += g
                        .neighbors(u)
                        .iter()
                        .filter(|&&w| scratch.dist(w).is_some())
                        .count();
                }
                (half_edges / 2 + 1).saturating_sub(vertices)
            },
        )
        .collect();
    let offending: Vec<usize> = (0..n).filter(|&v| excess[v] > 1).collect();
    TangleReport {
        tangle_free: offending.is_empty(),
        offending,
        max_excess: excess.into_iter().max().unwrap_or(0),
    }
}

/// Shell-size statistics used to check neighbourhood growth.
#[derive(Clone, Debug)]
pub struct ShellGrowth {
    /// `max_{t in 1..=ell, v} S_t(v) / alpha^t`.
    pub max_ratio: f64,
    /// `(t, v)` attaining `max_ratio`.
    pub argmax: (usize, usize),
    /// `Σ_v S_ell(v)^2`.
    pub sum_sq_top: f64,
    /// `Σ_v S_ell(v)^2 / (n alpha^{2 ell})`.
    pub normalized_sum_sq: f64,
    /// `S_ell(v)` for every vertex.
    pub top_sizes: Vec<usize>,
}

pub fn shell_growth_report(g: &SparseGraph, ell: usize, alpha: f64) -> ShellGrowth {
    let n = g.n();
    let sizes: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |scratch, v| scratch.run(g, &[v], ell).iter().map(Vec::len).collect(),
        )
        .collect();
    let mut max_ratio = 0.0;
    let mut argmax = (0, 0);
    for (v, s) in sizes.iter().enumerate() {
        for (t, &st) in s.iter().enumerate().skip(1) {
            let ratio = st as f64 / alpha.powi(t as i32);
            if ratio > max_ratio {
                max_ratio = ratio;
                argmax = (t, v);
            }
        }
    }
    let top_sizes: Vec<usize> = sizes.iter().map(|s| s[ell]).collect();
    let sum_sq_top: f64 = top_sizes.iter().map(|&s| (s * s) as f64).sum();
    ShellGrowth {
        max_ratio,
        argmax,
        sum_sq_top,
        normalized_sum_sq: sum_sq_top / (n as f64 * alpha.powi(2 * ell as i32)),
        top_sizes,
    }
}

/// All simple cycles of length `3..=max_len`, each reported once as a vertex
/// sequence starting at its smallest vertex.
pub fn short_cycles(g: &SparseGraph, max_len: usize) -> Vec<Vec<usize>> {
    fn extend(
        g: &SparseGraph,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        max_len: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().expect("non-empty path");
        for &w in g.neighbors(u) {
            if w == start && path.len() >= 3 && path[1] < u {
                out.push(path.clone());
            } else if w > start && !on_path[w] && path.len() < max_len {
                on_path[w] = true;
                path.push(w);
                extend(g, start, path, on_path, max_len, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.n()];
    for s in 0..g.n() {
        let mut path = vec![s];
        on_path[s] = true;
        extend(g, s, &mut path, &mut on_path, max_len, &mut out);
        on_path[s] = false;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> SparseGraph {
        SparseGraph::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap()
    }

    fn entries(m: &SparseSymMatrix) -> Vec<(usize, usize, u32)> {
        m.entries().collect()
    }

    #[test]
    fn from_edges_dedups_and_rejects_loops() {
        let g = SparseGraph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(SparseGraph::from_edges(3, [(1, 1)]).is_err());
        assert!(SparseGraph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn shells_on_small_graphs() {
        let p = bfs_shells(&SparseGraph::path(4), 0, 2, None);
        assert_eq!(p.sizes, vec![1, 1, 1]);
        assert_eq!(p.shells, vec![vec![0], vec![1], vec![2]]);

        let c = bfs_shells(&SparseGraph::cycle(5), 3, 2, None);
        assert_eq!(c.sizes, vec![1, 2, 2]);

        let s = bfs_shells(&SparseGraph::star(6), 0, 1, None);
        assert_eq!(s.sizes[1], 6);
    }

    #[test]
    fn shell_type_counts_sum_to_sizes() {
        let g = SparseGraph::cycle(6);
        let sigma = [0, 1, 0, 1, 0, 1];
        let p = bfs_shells(&g, 0, 3, Some((&sigma, 2)));
        let counts = p.type_counts.unwrap();
        for (t, c) in counts.iter().enumerate() {
            assert_eq!(c.iter().sum::<usize>(), p.sizes[t]);
        }
        assert_eq!(counts[1], vec![0, 2]);
        assert_eq!(counts[3], vec![0, 1]);
    }

    #[test]
    fn isolated_vertex_shells_truncate() {
        let g = SparseGraph::empty(3);
        let p = bfs_shells(&g, 1, 3, None);
        assert_eq!(p.sizes, vec![1, 0, 0, 0]);
        assert_eq!(distance_matrix(&g, 2).nnz(), 0);
    }

    #[test]
    fn distance_matrix_small_cases() {
        let d = distance_matrix(&SparseGraph::path(4), 2);
        assert_eq!(entries(&d), vec![(0, 2, 1), (1, 3, 1), (2, 0, 1), (3, 1, 1)]);

        let g = two_triangles();
        assert_eq!(distance_matrix(&g, 1), {
            let mut a = SparseSymMatrix::adjacency(&g);
            a.kind = MatrixKind::Distance;
            a
        });
    }

    #[test]
    fn path_expansion_small_cases() {
        let c4 = SparseGraph::cycle(4);
        let b = path_expansion_matrix(&c4, 2, 8);
        let d = distance_matrix(&c4, 2);
        assert_eq!(b.matrix.get(0, 2), 2);
        assert_eq!(d.get(0, 2), 1);
        assert!(b.saturated.is_empty());

        let p = path_expansion_matrix(&SparseGraph::path(4), 2, 2);
        assert_eq!(
            entries(&p.matrix),
            vec![(0, 2, 1), (1, 3, 1), (2, 0, 1), (3, 1, 1)]
        );
    }

    #[test]
    fn path_expansion_reports_saturation() {
        // K4: two self-avoiding 2-walks between any pair
        let k4 = SparseGraph::complete(4);
        let b = path_expansion_matrix(&k4, 2, 1);
        assert_eq!(b.matrix.get(0, 1), 1);
        assert_eq!(b.saturated.len(), 6);
        let exact = path_expansion_matrix(&k4, 2, 100);
        assert_eq!(exact.matrix.get(0, 1), 2);
    }

    #[test]
    fn delta_on_tree_and_square() {
        let tree = SparseGraph::complete_tree(2, 3);
        for ell in 1..=4 {
            let b = path_expansion_matrix(&tree, ell, 4).matrix;
            let d = distance_matrix(&tree, ell);
            assert_eq!(delta_matrix(&b, &d).unwrap().nnz(), 0);
        }
        let c4 = SparseGraph::cycle(4);
        let delta = delta_matrix(
            &path_expansion_matrix(&c4, 2, 4).matrix,
            &distance_matrix(&c4, 2),
        )
        .unwrap();
        assert_eq!(entries(&delta), vec![(0, 2, 1), (1, 3, 1), (2, 0, 1), (3, 1, 1)]);
    }

    #[test]
    fn delta_rejects_inconsistent_inputs() {
        let g = SparseGraph::path(4);
        let d = distance_matrix(&g, 2);
        let zero = SparseSymMatrix::from_rows(4, 2, MatrixKind::PathExpansion, vec![vec![]; 4]);
        assert!(matches!(
            delta_matrix(&zero, &d),
            Err(Error::NegativeEntry { .. })
        ));
        assert!(delta_matrix(&d, &distance_matrix(&g, 1)).is_err());
    }

    #[test]
    fn tangle_free_cases() {
        assert!(tangle_free_check(&SparseGraph::complete_tree(3, 4), 3).tangle_free);
        assert!(tangle_free_check(&SparseGraph::cycle(9), 5).tangle_free);
        let r = tangle_free_check(&two_triangles(), 2);
        assert!(!r.tangle_free);
        assert!(r.offending.contains(&0));
        assert_eq!(r.max_excess, 2);
    }

    #[test]
    fn growth_on_path_and_tree() {
        let p = shell_growth_report(&SparseGraph::path(20), 4, 3.0);
        assert!(p.max_ratio <= 2.0 / 3.0 + 1e-12);

        let tree = SparseGraph::complete_tree(3, 4);
        let g = shell_growth_report(&tree, 4, 3.0);
        // the root grows exactly geometrically; inner vertices see one extra parent
        assert!(g.max_ratio >= 1.0 && g.max_ratio <= 2.0, "{}", g.max_ratio);
        assert_eq!(g.top_sizes[0], 81);
    }

    #[test]
    fn short_cycles_counts() {
        assert_eq!(short_cycles(&SparseGraph::cycle(5), 5).len(), 1);
        assert_eq!(short_cycles(&SparseGraph::cycle(5), 4).len(), 0);
        assert_eq!(short_cycles(&two_triangles(), 6).len(), 2);
        // K4 has 4 triangles and 3 four-cycles
        assert_eq!(short_cycles(&SparseGraph::complete(4), 4).len(), 7);
    }

    #[test]
    fn abs_diff_and_matvec() {
        let g = SparseGraph::path(3);
        let a = SparseSymMatrix::adjacency(&g);
        let mut y = vec![0.0; 3];
        a.apply(&[1.0, 2.0, 3.0], &mut y);
        assert_eq!(y, vec![2.0, 4.0, 2.0]);
        assert_eq!(a.quadratic_form(&[1.0, 1.0, 1.0]), 4.0);
        let d2 = distance_matrix(&g, 2);
        let diff = a.abs_diff(&d2).unwrap();
        assert_eq!(diff.nnz(), 6);
    }
}
