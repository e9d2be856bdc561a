//! Undirected and bipartite graphs, induced matchings and matching covers.
//!
//! Vertices are dense ids `0..n`. Undirected edges are stored normalized as
//! `(min, max)`; bipartite edges are `(left, right)` pairs.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::{Error, Result};

/// Above this many vertices adjacency falls back to binary search in the
/// sorted neighbor lists instead of a dense bit matrix.
const DENSE_ADJACENCY_LIMIT: usize = 20_000;

#[derive(Clone, Debug)]
struct BitMatrix {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words_per_row + c / 64] |= 1 << (c % 64);
    }
}

#[inline]
pub(crate) fn norm(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph with O(1) adjacency queries at desk scale.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    dense: Option<BitMatrix>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate edges collapse; self
    /// loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::param(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::param(format!("edge {u}-{v} outside [0, {n})")));
            }
            list.push(norm(u, v));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_edges(n, list))
    }

    /// Builds the graph on `n` vertices whose edges are the pairs `u < v`
    /// accepted by `adjacent`. Rows are evaluated in parallel.
    pub fn from_predicate<F>(n: usize, adjacent: F) -> Self
    where
        F: Fn(usize, usize) -> bool + Sync,
    {
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|u| (u + 1..n).filter(|&v| adjacent(u, v)).collect())
            .collect();
        let edges = rows
            .into_iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.into_iter().map(move |v| (u, v)))
            .collect();
        Self::from_sorted_edges(n, edges)
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let dense = (n <= DENSE_ADJACENCY_LIMIT).then(|| {
            let mut m = BitMatrix::new(n, n);
            for &(u, v) in &edges {
                m.set(u, v);
                m.set(v, u);
            }
            m
        });
        Graph {
            n,
            edges,
            neighbors,
            dense,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        Self::from_predicate(n, |_, _| true)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match &self.dense {
            Some(m) => m.get(u, v),
            None => self.neighbors[u].binary_search(&v).is_ok(),
        }
    }

    /// Position of the edge in [`Graph::edges`].
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&norm(u, v)).ok()
    }

    /// Number of non-neighbors of `v` other than `v` itself.
    pub fn complement_degree(&self, v: usize) -> usize {
        self.n - 1 - self.degree(v)
    }

    /// Total number of missing pairs, `C(n, 2) - |E|`.
    pub fn missing_edge_count(&self) -> u64 {
        let n = self.n as u64;
        n * n.saturating_sub(1) / 2 - self.edges.len() as u64
    }

    /// Subgraph induced on `vertices` (which must be distinct). Local id `i`
    /// corresponds to `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut local = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            local.insert(v, i);
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for w in &self.neighbors[v] {
                if let Some(&j) = local.get(w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        edges.sort_unstable();
        Graph::from_sorted_edges(vertices.len(), edges)
    }
}

/// Bipartite graph with `left` and `right` vertex classes.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
    adj: BitMatrix,
}

impl BipartiteGraph {
    pub fn from_edges<I>(left: usize, right: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<_> = edges.into_iter().collect();
        if let Some(&(l, r)) = list.iter().find(|&&(l, r)| l >= left || r >= right) {
            return Err(Error::param(format!(
                "bipartite edge {l}>{r} outside {left}x{right}"
            )));
        }
        list.sort_unstable();
        list.dedup();
        let mut adj = BitMatrix::new(left, right);
        for &(l, r) in &list {
            adj.set(l, r);
        }
        Ok(BipartiteGraph {
            left,
            right,
            edges: list,
            adj,
        })
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        l < self.left && r < self.right && self.adj.get(l, r)
    }

    /// Pairs of `left x right` that are not edges.
    pub fn missing_count(&self) -> usize {
        self.left * self.right - self.edges.len()
    }

    /// The same graph as an undirected graph on `left + right` vertices,
    /// right vertex `r` becoming `left + r`.
    pub fn as_graph(&self) -> Graph {
        let off = self.left;
        let mut edges: Vec<_> = self.edges.iter().map(|&(l, r)| (l, off + r)).collect();
        edges.sort_unstable();
        Graph::from_sorted_edges(self.left + self.right, edges)
    }

    fn lift_matching(&self, m: &Matching) -> Matching {
        Matching::new(m.edges().iter().map(|&(l, r)| (l, self.left + r)).collect())
    }

    /// Induced-matching test in the bipartite sense: for two matching edges
    /// `(a, b)` and `(c, d)`, neither `(a, d)` nor `(c, b)` is an edge.
    pub fn is_induced_matching(&self, m: &Matching) -> Result<bool> {
        if let Some(&(l, r)) = m.edges().iter().find(|&&(l, r)| !self.has_edge(l, r)) {
            return Err(Error::NonEdge(l, r));
        }
        for (i, &(a, b)) in m.edges().iter().enumerate() {
            for &(c, d) in &m.edges()[i + 1..] {
                if a == c || b == d || self.adj.get(a, d) || self.adj.get(c, b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Cover verification through the undirected view. Witness vertex ids in
    /// the report use the lifted numbering (right ids offset by `left`).
    pub fn verify_cover(&self, cover: &MatchingCover) -> CoverReport {
        let lifted = MatchingCover::new(
            cover
                .matchings()
                .iter()
                .map(|m| self.lift_matching(m))
                .collect(),
        );
        verify_cover(&self.as_graph(), &lifted)
    }
}

/// A list of vertex-disjoint edges. The constructor does not enforce the
/// matching property; [`is_induced_matching`] and [`verify_cover`] do.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(edges: Vec<(usize, usize)>) -> Self {
        Matching { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn into_edges(self) -> Vec<(usize, usize)> {
        self.edges
    }
}

impl From<Vec<(usize, usize)>> for Matching {
    fn from(edges: Vec<(usize, usize)>) -> Self {
        Matching::new(edges)
    }
}

/// An ordered list of matchings plus an index from edge to the ordinal of the
/// first matching holding it.
#[derive(Clone, Debug, Default)]
pub struct MatchingCover {
    matchings: Vec<Matching>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl MatchingCover {
    pub fn new(matchings: Vec<Matching>) -> Self {
        let mut edge_index = HashMap::new();
        for (i, m) in matchings.iter().enumerate() {
            for &e in m.edges() {
                edge_index.entry(e).or_insert(i);
            }
        }
        MatchingCover {
            matchings,
            edge_index,
        }
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn into_matchings(self) -> Vec<Matching> {
        self.matchings
    }

    /// Number of matchings, `t`.
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// Total number of edges over all matchings (with multiplicity).
    pub fn edge_total(&self) -> usize {
        self.matchings.iter().map(Matching::len).sum()
    }

    /// Ordinal of the matching holding `edge`, looked up as stored.
    pub fn matching_of(&self, edge: (usize, usize)) -> Option<usize> {
        self.edge_index.get(&edge).copied()
    }

    /// `(r_min, r_max)`, zero for an empty cover.
    pub fn size_range(&self) -> (usize, usize) {
        let min = self.matchings.iter().map(Matching::len).min().unwrap_or(0);
        let max = self.matchings.iter().map(Matching::len).max().unwrap_or(0);
        (min, max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    SharedEndpoint,
    CrossEdge,
    MultiplyCovered,
    UncoveredEdge,
    NonEdge,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::SharedEndpoint => "shared-endpoint",
            ViolationKind::CrossEdge => "cross-edge",
            ViolationKind::MultiplyCovered => "multiply-covered",
            ViolationKind::UncoveredEdge => "uncovered-edge",
            ViolationKind::NonEdge => "non-edge",
        };
        f.write_str(s)
    }
}

/// One defect found by [`verify_cover`].
///
/// Witness layout by kind:
/// * shared-endpoint: `[matching, vertex]`
/// * cross-edge: `[matching, u, v]` where `uv` is the joining graph edge
/// * multiply-covered: `[u, v, times]`
/// * uncovered-edge: `[u, v]`
/// * non-edge: `[matching, u, v]`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub r_min: usize,
    pub r_max: usize,
    pub t: usize,
}

impl CoverReport {
    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// True iff `m` is a matching whose edges are pairwise joined by no edge of
/// `g`. Fails if some edge of `m` is not an edge of `g`.
pub fn is_induced_matching(g: &Graph, m: &Matching) -> Result<bool> {
    if let Some(&(u, v)) = m.edges().iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(Error::NonEdge(u, v));
    }
    let edges = m.edges();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                return Ok(false);
            }
            if g.has_edge(a, c) || g.has_edge(a, d) || g.has_edge(b, c) || g.has_edge(b, d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks that every edge of `g` lies in exactly one matching of `cover` and
/// that every matching is induced in `g`. Every defect is listed.
pub fn verify_cover(g: &Graph, cover: &MatchingCover) -> CoverReport {
    let mut violations = Vec::new();
    let mut hits = vec![0usize; g.edge_count()];

    for (i, m) in cover.matchings().iter().enumerate() {
        let mut seen = HashMap::new();
        for &(u, v) in m.edges() {
            for x in [u, v] {
                let c = seen.entry(x).or_insert(0usize);
                *c += 1;
                if *c == 2 {
                    violations.push(Violation {
                        kind: ViolationKind::SharedEndpoint,
                        witness: vec![i, x],
                    });
                }
            }
            match g.edge_id(u, v) {
                Some(id) => hits[id] += 1,
                None => violations.push(Violation {
                    kind: ViolationKind::NonEdge,
                    witness: vec![i, u, v],
                }),
            }
        }
        let edges = m.edges();
        for (j, &(a, b)) in edges.iter().enumerate() {
            for &(c, d) in &edges[j + 1..] {
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                for (x, y) in [(a, c), (a, d), (b, c), (b, d)] {
                    if g.has_edge(x, y) {
                        let (x, y) = norm(x, y);
                        violations.push(Violation {
                            kind: ViolationKind::CrossEdge,
                            witness: vec![i, x, y],
                        });
                    }
                }
            }
        }
    }

    for (id, &h) in hits.iter().enumerate() {
        let (u, v) = g.edges()[id];
        match h {
            0 => violations.push(Violation {
                kind: ViolationKind::UncoveredEdge,
                witness: vec![u, v],
            }),
            1 => {}
            times => violations.push(Violation {
                kind: ViolationKind::MultiplyCovered,
                witness: vec![u, v, times],
            }),
        }
    }

    let (r_min, r_max) = cover.size_range();
    CoverReport {
        valid: violations.is_empty(),
        violations,
        r_min,
        r_max,
        t: cover.len(),
    }
}

/// Greedy induced-matching cover of a graph with maximum degree `d`.
///
/// Edges are taken in ascending `(min, max)` order and each goes into the
/// first matching it has no conflict with. Two edges conflict when they share
/// an endpoint or a graph edge joins their endpoints, so each edge conflicts
/// with fewer than `2d^2` others and at most `2d^2` matchings are opened.
pub fn greedy_induced_matching_cover(g: &Graph) -> MatchingCover {
    let words = g.n_vertices().div_ceil(64);
    // blocked[i] = closed neighbourhood of the vertices matched in matching i
    let mut blocked: Vec<Vec<u64>> = Vec::new();
    let mut matchings: Vec<Vec<(usize, usize)>> = Vec::new();
    let is_set = |row: &[u64], x: usize| row[x / 64] >> (x % 64) & 1 == 1;

    for &(a, b) in g.edges() {
        let slot = blocked
            .iter()
            .position(|row| !is_set(row, a) && !is_set(row, b))
            .unwrap_or_else(|| {
                blocked.push(vec![0; words]);
                matchings.push(Vec::new());
                blocked.len() - 1
            });
        let row = &mut blocked[slot];
        for &x in [a, b].iter().chain(g.neighbors(a)).chain(g.neighbors(b)) {
            row[x / 64] |= 1 << (x % 64);
        }
        matchings[slot].push((a, b));
    }

    let d = g.max_degree();
    assert!(
        matchings.len() <= 2 * d * d,
        "greedy cover opened {} matchings, above 2d^2 = {}",
        matchings.len(),
        2 * d * d
    );
    MatchingCover::new(matchings.into_iter().map(Matching::new).collect())
}

/// `N - 1 - deg(v)`.
pub fn complement_degree(g: &Graph, v: usize) -> usize {
    g.complement_degree(v)
}
