//! Uniformizing covers, the triangle graph of a cover and the lower-bound
//! inequalities on the number of missing edges.

use crate::graph::{norm, verify_cover, Graph, Matching, MatchingCover};
use crate::{Error, Result};

/// A cover whose matchings all have the same size, plus the edges that did
/// not fit.
#[derive(Clone, Debug)]
pub struct Uniformized {
    pub cover: MatchingCover,
    pub dropped: Vec<(usize, usize)>,
}

/// Splits every matching (edges ascending) into blocks of exactly `r`,
/// dropping the `|M| mod r` leftover edges.
pub fn uniformize(cover: &MatchingCover, r: usize) -> Result<Uniformized> {
    if r == 0 {
        return Err(Error::param("matching size r must be at least 1"));
    }
    let mut out = Vec::new();
    let mut dropped = Vec::new();
    for m in cover.matchings() {
        let mut edges = m.edges().to_vec();
        edges.sort_unstable();
        let mut blocks = edges.chunks_exact(r);
        out.extend(blocks.by_ref().map(|b| Matching::new(b.to_vec())));
        dropped.extend_from_slice(blocks.remainder());
    }
    Ok(Uniformized {
        cover: MatchingCover::new(out),
        dropped,
    })
}

/// Tripartite graph with one apex per (restricted) matching; every edge of
/// it lies in exactly one triangle.
#[derive(Clone, Debug)]
pub struct TriangleGraph {
    /// Side of every original vertex; `true` is `U`.
    pub in_u: Vec<bool>,
    /// Apex `i` has vertex id `N + i`.
    pub apex_count: usize,
    /// Crossing edges `E'` of the bipartization, `u < v`.
    pub crossing: Vec<(usize, usize)>,
    pub graph: Graph,
    /// `(u, v, apex)` with `u < v`.
    pub triangles: Vec<(usize, usize, usize)>,
}

impl TriangleGraph {
    pub fn original_vertices(&self) -> usize {
        self.in_u.len()
    }
}

/// Greedy cut: vertices in ascending order, each put on the side holding
/// fewer of its already placed neighbours (ties go to `U`). At least half of
/// the edges cross.
pub fn greedy_bipartition(g: &Graph) -> Vec<bool> {
    let mut in_u = vec![false; g.n_vertices()];
    for v in 0..g.n_vertices() {
        let (mut on_u, mut on_v) = (0usize, 0usize);
        for &w in g.neighbors(v).iter().take_while(|&&w| w < v) {
            if in_u[w] {
                on_u += 1;
            } else {
                on_v += 1;
            }
        }
        in_u[v] = on_u <= on_v;
    }
    in_u
}

pub fn triangle_graph(g: &Graph, cover: &MatchingCover) -> Result<TriangleGraph> {
    let report = verify_cover(g, cover);
    if !report.valid {
        return Err(Error::Verification(format!(
            "cover is not a valid induced-matching cover ({} violations)",
            report.violations.len()
        )));
    }
    let n = g.n_vertices();
    let in_u = greedy_bipartition(g);
    let mut crossing = Vec::new();
    let mut h_edges = Vec::new();
    let mut triangles = Vec::new();
    let mut apex_count = 0;
    for m in cover.matchings() {
        let kept: Vec<_> = m
            .edges()
            .iter()
            .map(|&(u, v)| norm(u, v))
            .filter(|&(u, v)| in_u[u] != in_u[v])
            .collect();
        if kept.is_empty() {
            continue;
        }
        let w = n + apex_count;
        apex_count += 1;
        for (u, v) in kept {
            crossing.push((u, v));
            h_edges.extend([(u, v), (u, w), (v, w)]);
            triangles.push((u, v, w));
        }
    }
    crossing.sort_unstable();
    let graph = Graph::from_edges(n + apex_count, h_edges)?;
    Ok(TriangleGraph {
        in_u,
        apex_count,
        crossing,
        graph,
        triangles,
    })
}

/// Every triangle `a < b < c` of `g`.
pub fn enumerate_triangles(g: &Graph) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        let (na, nb) = (g.neighbors(a), g.neighbors(b));
        let (mut i, mut j) = (0, 0);
        while i < na.len() && j < nb.len() {
            match na[i].cmp(&nb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if na[i] > b {
                        out.push((a, b, na[i]));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    out
}

/// Number of triangles through each edge, indexed like `g.edges()`.
pub fn triangles_per_edge(g: &Graph) -> Vec<usize> {
    let mut counts = vec![0; g.edge_count()];
    for (a, b, c) in enumerate_triangles(g) {
        for (u, v) in [(a, b), (a, c), (b, c)] {
            counts[g.edge_id(u, v).expect("triangle side is an edge")] += 1;
        }
    }
    counts
}

/// Per-vertex check of `C(d_v, 2) >= (r - 1)(N - 1 - d_v)`, `d_v` the
/// complement degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDegreeReport {
    pub r: usize,
    pub complement_degrees: Vec<usize>,
    /// `C(d_v, 2) - (r - 1)(N - 1 - d_v)`.
    pub margins: Vec<i128>,
    pub violations: Vec<usize>,
}

impl MinDegreeReport {
    pub fn min_margin(&self) -> Option<i128> {
        self.margins.iter().copied().min()
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn min_degree_margins(g: &Graph, r: usize) -> MinDegreeReport {
    let n = g.n_vertices() as i128;
    let complement_degrees: Vec<usize> = (0..g.n_vertices())
        .map(|v| g.complement_degree(v))
        .collect();
    let margins: Vec<i128> = complement_degrees
        .iter()
        .map(|&d| {
            let d = d as i128;
            d * (d - 1) / 2 - (r as i128 - 1) * (n - 1 - d)
        })
        .collect();
    let violations = (0..margins.len()).filter(|&v| margins[v] < 0).collect();
    MinDegreeReport {
        r,
        complement_degrees,
        margins,
        violations,
    }
}

/// Verifies that `cover` is a valid cover of `g` with all matchings of one
/// size `r`, then checks the inequality. A violation on such an instance is
/// an internal error.
pub fn check_min_degree_bound(g: &Graph, cover: &MatchingCover) -> Result<MinDegreeReport> {
    let report = verify_cover(g, cover);
    if !report.valid {
        return Err(Error::Verification(
            "cover is not a valid induced-matching cover".into(),
        ));
    }
    if report.r_min != report.r_max {
        return Err(Error::param(format!(
            "cover is not uniform: matching sizes range over {}..={}",
            report.r_min, report.r_max
        )));
    }
    let out = min_degree_margins(g, report.r_min.max(1));
    if let Some(&v) = out.violations.first() {
        return Err(Error::Verification(format!(
            "min-degree inequality fails at vertex {v} on a verified {}-uniform cover",
            out.r
        )));
    }
    Ok(out)
}

/// `(1 / (2 sqrt 2)) sqrt(r) N^(3/2)` with the lower-order term dropped.
/// Heuristic: for reporting only.
pub fn general_missing_lower_bound(n: usize, r: usize) -> Result<f64> {
    if r < 2 {
        return Err(Error::param(format!(
            "general missing bound needs r >= 2, got {r}"
        )));
    }
    Ok((r as f64).sqrt() * (n as f64).powf(1.5) / (2.0 * 2f64.sqrt()))
}

/// `r^(2/3) |U|^(2/3) |V|^(2/3)` with the hidden constant set to 1.
/// Heuristic: for reporting only.
pub fn bipartite_missing_lower_bound(r: usize, u: usize, v: usize) -> Result<f64> {
    if r < 3 {
        return Err(Error::param(format!(
            "bipartite missing bound needs r >= 3, got {r}"
        )));
    }
    Ok(((r * u) as f64 * v as f64).powf(2.0 / 3.0))
}
