//! Lattice graph on `[C]^n` whose edges join points at squared distance
//! within `n` of the mean `mu = n (C^2 - 1) / 6`, and its decomposition into
//! induced matchings through the shells
//! `V_z = { x : | |x - z|^2 - mu/4 | <= 3n/4 }`.
//!
//! Every band and shell test is done in integers after clearing the
//! denominators of `mu` (6) and `mu/4` (24).

use num_rational::Rational64;
use rayon::prelude::*;

use crate::graph::{greedy_induced_matching_cover, Graph, Matching, MatchingCover};
use crate::lattice::{lattice_size, sq_distance, LatticeVertex, Limits, PointTable};
use crate::{Error, Result};

/// Shells covered per parallel batch before the sequential merge.
const SHELL_BATCH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeomParams {
    c: u32,
    n: usize,
}

impl GeomParams {
    pub fn new(c: u32, n: usize) -> Result<Self> {
        if c < 2 {
            return Err(Error::param(format!(
                "alphabet size C = {c} must be at least 2"
            )));
        }
        Ok(GeomParams { c, n })
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> Rational64 {
        mean_sq_distance(self.c, self.n)
    }

    /// `6 mu = n (C^2 - 1)`.
    fn mu6(&self) -> i64 {
        self.n as i64 * (self.c as i64 * self.c as i64 - 1)
    }

    /// The ball-volume degree bound assumes even `n`.
    pub fn is_even(&self) -> bool {
        self.n.is_multiple_of(2)
    }

    /// `n >= 2C`, under which every edge lies in some shell.
    pub fn covers_all_edges(&self) -> bool {
        self.n >= 2 * self.c as usize
    }

    pub fn vertex_count(&self) -> Option<u128> {
        lattice_size(self.c, self.n)
    }

    /// Band test on a squared distance: `|D - mu| <= n`.
    #[inline]
    pub fn in_band(&self, sq_dist: i64) -> bool {
        (6 * sq_dist - self.mu6()).abs() <= 6 * self.n as i64
    }

    /// Shell test on a squared distance to the centre: `|D - mu/4| <= 3n/4`.
    #[inline]
    pub fn in_shell_distance(&self, sq_dist: i64) -> bool {
        (24 * sq_dist - self.mu6()).abs() <= 18 * self.n as i64
    }

    pub fn is_edge(&self, x: &LatticeVertex, y: &LatticeVertex) -> bool {
        x != y && self.in_band(x.sq_distance(y))
    }

    pub fn in_shell(&self, x: &LatticeVertex, z: &LatticeVertex) -> bool {
        self.in_shell_distance(x.sq_distance(z))
    }

    fn check_vertex(&self, v: &LatticeVertex) -> Result<()> {
        if v.dim() != self.n || v.coords().iter().any(|&x| x < 1 || x > self.c) {
            return Err(Error::param(format!(
                "{:?} is not a point of [{}]^{}",
                v.coords(),
                self.c,
                self.n
            )));
        }
        Ok(())
    }
}

/// Mean squared distance between two uniform points of `[C]^n`, exactly
/// `n (C^2 - 1) / 6`.
pub fn mean_sq_distance(c: u32, n: usize) -> Rational64 {
    let c = c as i64;
    Rational64::new(n as i64 * (c * c - 1), 6)
}

/// Graph on `[C]^n` with `xy` an edge iff `| |x-y|^2 - mu | <= n`. Vertex ids
/// are mixed-radix indices of the coordinates.
pub fn build_geometric_graph(p: &GeomParams, limits: &Limits) -> Result<Graph> {
    let table = PointTable::new(p.c, p.n, limits)?;
    Ok(graph_from_table(p, &table))
}

fn graph_from_table(p: &GeomParams, table: &PointTable) -> Graph {
    Graph::from_predicate(table.len(), |u, v| {
        p.in_band(sq_distance(table.point(u), table.point(v)))
    })
}

/// Hoeffding bound on the number of missing pairs,
/// `C(N, 2) * 2 * exp(-n / (2 C^4))`.
pub fn missing_edge_bound(p: &GeomParams) -> f64 {
    let big_n = (p.c as f64).powi(p.n as i32);
    let pairs = big_n * (big_n - 1.0) / 2.0;
    pairs * 2.0 * (-(p.n as f64) / (2.0 * (p.c as f64).powi(4))).exp()
}

/// Sign vector with entries in `{-1/2, 0, +1/2}`, stored doubled as
/// `{-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceVector {
    doubled: Vec<i8>,
}

impl BalanceVector {
    /// Entries of `2w`.
    pub fn doubled(&self) -> &[i8] {
        &self.doubled
    }

    pub fn entries(&self) -> Vec<Rational64> {
        self.doubled
            .iter()
            .map(|&h| Rational64::new(h as i64, 2))
            .collect()
    }

    /// `<a, w>` as an exact rational.
    pub fn dot(&self, a: &[i64]) -> Rational64 {
        let twice: i64 = a
            .iter()
            .zip(&self.doubled)
            .map(|(&x, &h)| x * h as i64)
            .sum();
        Rational64::new(twice, 2)
    }
}

/// Chooses `w_i = +-1/2` on the support of `a` (and 0 off it) so that each
/// term `a_i w_i` opposes the running partial sum, which keeps
/// `|<a, w>| <= C/2`. A zero partial sum picks `+1/2`.
pub fn balance_vector(a: &[i64], c: u32) -> Result<BalanceVector> {
    if let Some(bad) = a.iter().find(|x| x.unsigned_abs() > c as u64) {
        return Err(Error::param(format!(
            "entry {bad} exceeds C = {c} in absolute value"
        )));
    }
    let mut partial = 0i64; // 2 * sum so far
    let doubled = a
        .iter()
        .map(|&ai| {
            if ai == 0 {
                return 0;
            }
            let h: i8 = if partial > 0 {
                -(ai.signum() as i8)
            } else if partial < 0 {
                ai.signum() as i8
            } else {
                1
            };
            partial += ai * h as i64;
            h
        })
        .collect();
    Ok(BalanceVector { doubled })
}

/// Centre `z = (x + y)/2 + w` of a shell holding both endpoints of the edge
/// `xy`, where `w` balances the odd coordinate differences.
pub fn center_for_edge(
    x: &LatticeVertex,
    y: &LatticeVertex,
    p: &GeomParams,
) -> Result<LatticeVertex> {
    p.check_vertex(x)?;
    p.check_vertex(y)?;
    if !p.is_edge(x, y) {
        return Err(Error::NonEdge(x.index(p.c), y.index(p.c)));
    }
    let diff: Vec<i64> = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(&xi, &yi)| {
            let d = yi as i64 - xi as i64;
            if d % 2 == 0 {
                0
            } else {
                d
            }
        })
        .collect();
    let w = balance_vector(&diff, p.c)?;
    let coords = x
        .coords()
        .iter()
        .zip(y.coords())
        .zip(w.doubled())
        .map(|((&xi, &yi), &h)| ((xi as i64 + yi as i64 + h as i64) / 2) as u32)
        .collect();
    LatticeVertex::new(coords, p.c)
}

/// Ids of the vertices of the shell centred at `z`, ascending.
pub fn shell(z: &LatticeVertex, p: &GeomParams, limits: &Limits) -> Result<Vec<usize>> {
    p.check_vertex(z)?;
    let table = PointTable::new(p.c, p.n, limits)?;
    Ok(shell_in_table(z.coords(), p, &table))
}

fn shell_in_table(z: &[u32], p: &GeomParams, table: &PointTable) -> Vec<usize> {
    (0..table.len())
        .filter(|&id| p.in_shell_distance(sq_distance(table.point(id), z)))
        .collect()
}

/// `|y - (2z - x)|^2`, the squared distance from `y` to the antipode of `x`
/// about `z`. The parallelogram-law form
/// `2|x-z|^2 + 2|y-z|^2 - |x-y|^2` is evaluated as well and must agree.
pub fn antipodal_gap(x: &LatticeVertex, y: &LatticeVertex, z: &LatticeVertex) -> i64 {
    antipodal_gap_coords(x.coords(), y.coords(), z.coords())
}

pub(crate) fn antipodal_gap_coords(x: &[u32], y: &[u32], z: &[u32]) -> i64 {
    let direct: i64 = x
        .iter()
        .zip(y)
        .zip(z)
        .map(|((&xi, &yi), &zi)| {
            let d = yi as i64 - (2 * zi as i64 - xi as i64);
            d * d
        })
        .sum();
    let parallelogram = 2 * sq_distance(x, z) + 2 * sq_distance(y, z) - sq_distance(x, y);
    assert_eq!(direct, parallelogram, "parallelogram law violated");
    direct
}

/// Result of [`antipodal_scan`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AntipodalScan {
    pub shells: usize,
    /// Adjacent pairs `x, y` found inside the scanned shells.
    pub pairs_checked: u64,
    pub max_gap: i64,
    /// Pairs whose antipodal gap exceeds `4n`, as `(z, x, y)` ids.
    pub violations: Vec<(usize, usize, usize)>,
    pub max_shell_degree: usize,
}

/// For each centre id, checks every adjacent pair inside its shell against
/// `antipodal_gap <= 4n`, and records the largest degree met inside a shell.
pub fn antipodal_scan(p: &GeomParams, centres: &[usize], limits: &Limits) -> Result<AntipodalScan> {
    let table = PointTable::new(p.c, p.n, limits)?;
    if let Some(&bad) = centres.iter().find(|&&z| z >= table.len()) {
        return Err(Error::param(format!("centre id {bad} out of range")));
    }
    let limit = 4 * p.n as i64;
    let per_shell: Vec<AntipodalScan> = centres
        .par_iter()
        .map(|&z| {
            let zc = table.point(z);
            let members = shell_in_table(zc, p, &table);
            let mut out = AntipodalScan {
                shells: 1,
                ..Default::default()
            };
            for (i, &x) in members.iter().enumerate() {
                let xc = table.point(x);
                let mut degree = 0;
                for (j, &y) in members.iter().enumerate() {
                    let yc = table.point(y);
                    if i == j || !p.in_band(sq_distance(xc, yc)) {
                        continue;
                    }
                    degree += 1;
                    if j < i {
                        continue;
                    }
                    let gap = antipodal_gap_coords(xc, yc, zc);
                    out.pairs_checked += 1;
                    out.max_gap = out.max_gap.max(gap);
                    if gap > limit {
                        out.violations.push((z, x, y));
                    }
                }
                out.max_shell_degree = out.max_shell_degree.max(degree);
            }
            out
        })
        .collect();
    Ok(per_shell
        .into_iter()
        .fold(AntipodalScan::default(), |mut acc, s| {
            acc.shells += s.shells;
            acc.pairs_checked += s.pairs_checked;
            acc.max_gap = acc.max_gap.max(s.max_gap);
            acc.violations.extend(s.violations);
            acc.max_shell_degree = acc.max_shell_degree.max(s.max_shell_degree);
            acc
        }))
}

/// Output of [`decompose_geometric`].
#[derive(Clone, Debug)]
pub struct GeomDecomposition {
    pub graph: Graph,
    pub cover: MatchingCover,
    /// Largest maximum degree over all shell subgraphs.
    pub max_shell_degree: usize,
    /// Matchings produced before removing repeated edges.
    pub raw_matchings: usize,
}

/// Covers each shell subgraph greedily (centres in ascending id order),
/// keeps every edge only in its first matching, drops emptied matchings.
///
/// An edge lying in no shell is a hard error; it cannot happen when
/// `n >= 2C`.
pub fn decompose_geometric(p: &GeomParams, limits: &Limits) -> Result<GeomDecomposition> {
    let table = PointTable::new(p.c, p.n, limits)?;
    let graph = graph_from_table(p, &table);
    let centres: Vec<usize> = (0..table.len()).collect();

    let mut covered = vec![false; graph.edge_count()];
    let mut matchings = Vec::new();
    let mut max_shell_degree = 0;
    let mut raw_matchings = 0;

    for batch in centres.chunks(SHELL_BATCH) {
        let shell_covers: Vec<(usize, Vec<Matching>)> = batch
            .par_iter()
            .map(|&z| {
                let members = shell_in_table(table.point(z), p, &table);
                let sub = graph.induced_subgraph(&members);
                let cover = greedy_induced_matching_cover(&sub);
                let global = cover
                    .into_matchings()
                    .into_iter()
                    .map(|m| {
                        Matching::new(
                            m.into_edges()
                                .into_iter()
                                .map(|(a, b)| (members[a], members[b]))
                                .collect(),
                        )
                    })
                    .collect();
                (sub.max_degree(), global)
            })
            .collect();

        for (degree, shell_matchings) in shell_covers {
            max_shell_degree = max_shell_degree.max(degree);
            raw_matchings += shell_matchings.len();
            for m in shell_matchings {
                let kept: Vec<_> = m
                    .into_edges()
                    .into_iter()
                    .filter(|&(u, v)| {
                        let id = graph
                            .edge_id(u, v)
                            .expect("shell edge must be a graph edge");
                        !std::mem::replace(&mut covered[id], true)
                    })
                    .collect();
                if !kept.is_empty() {
                    matchings.push(Matching::new(kept));
                }
            }
        }
    }

    if let Some(id) = covered.iter().position(|&c| !c) {
        let (u, v) = graph.edges()[id];
        return Err(Error::Verification(format!(
            "edge {u}-{v} lies in no shell (n >= 2C {})",
            if p.covers_all_edges() {
                "holds"
            } else {
                "does not hold"
            }
        )));
    }

    Ok(GeomDecomposition {
        graph,
        cover: MatchingCover::new(matchings),
        max_shell_degree,
        raw_matchings,
    })
}

/// `(10.5)^n`, the ball-volume bound on shell degrees.
pub fn shell_degree_bound(n: usize) -> f64 {
    10.5f64.powi(n as i32)
}

/// Exponents `(g, f)` of the asymptotic statement with the `o(1)` terms
/// dropped: missing pairs about `N^g`, matchings about `N^f`, where
/// `g = 2 - 1/(2 C^4 ln C)` and `f = 1 + 2 ln 10.5 / ln C`.
pub fn geometric_exponents(c: u32) -> (f64, f64) {
    let c = c as f64;
    let g = 2.0 - 1.0 / (2.0 * c.powi(4) * c.ln());
    let f = 1.0 + 2.0 * 10.5f64.ln() / c.ln();
    (g, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_cover;

    fn v(coords: &[u32], c: u32) -> LatticeVertex {
        LatticeVertex::new(coords.to_vec(), c).unwrap()
    }

    /// Mean of (a - b)^2 over all ordered pairs of [C], times n.
    fn brute_mu(c: u32, n: usize) -> Rational64 {
        let total: i64 = (1..=c as i64)
            .flat_map(|a| (1..=c as i64).map(move |b| (a - b) * (a - b)))
            .sum();
        Rational64::new(total * n as i64, (c * c) as i64)
    }

    #[test]
    fn mu_values() {
        assert_eq!(mean_sq_distance(2, 1), Rational64::new(1, 2));
        assert_eq!(mean_sq_distance(3, 2), Rational64::new(8, 3));
        assert_eq!(mean_sq_distance(7, 0), Rational64::from_integer(0));
        for c in 2..9 {
            for n in 0..6 {
                assert_eq!(mean_sq_distance(c, n), brute_mu(c, n));
            }
        }
    }

    #[test]
    fn toy_graph_counts() {
        let p = GeomParams::new(3, 2).unwrap();
        let g = build_geometric_graph(&p, &Limits::default()).unwrap();
        assert_eq!(g.n_vertices(), 9);
        assert_eq!(g.edge_count(), 26);
        assert_eq!(g.missing_edge_count(), 10);
        // band is exactly squared distances 1..=4
        for &(a, b) in g.edges() {
            let d =
                LatticeVertex::from_index(a, 3, 2).sq_distance(&LatticeVertex::from_index(b, 3, 2));
            assert!((1..=4).contains(&d));
        }
    }

    #[test]
    fn c2_n2_is_k4() {
        let p = GeomParams::new(2, 2).unwrap();
        let g = build_geometric_graph(&p, &Limits::default()).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn resource_cap() {
        let p = GeomParams::new(3, 4).unwrap();
        let lim = Limits {
            max_vertices: 50,
            ..Limits::default()
        };
        assert!(matches!(
            build_geometric_graph(&p, &lim),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn hoeffding_bound() {
        let p = GeomParams::new(3, 6).unwrap();
        let expected = 265_356.0 * 2.0 * (-6.0f64 / 162.0).exp();
        assert!((missing_edge_bound(&p) - expected).abs() < 1e-6);
        assert!((missing_edge_bound(&p) - 511_415.547_476).abs() < 1e-3);
        assert_eq!(missing_edge_bound(&GeomParams::new(3, 0).unwrap()), 0.0);
    }

    #[test]
    fn balance_examples() {
        let w = balance_vector(&[0, 0, 0], 3).unwrap();
        assert_eq!(w.doubled(), &[0, 0, 0]);
        let w = balance_vector(&[2, -2], 3).unwrap();
        assert_eq!(w.doubled(), &[1, 1]);
        assert_eq!(w.dot(&[2, -2]), Rational64::from_integer(0));
        assert!(balance_vector(&[4], 3).is_err());
    }

    #[test]
    fn center_midpoint_when_even() {
        let p = GeomParams::new(5, 2).unwrap();
        let x = v(&[1, 1], 5);
        let y = v(&[3, 3], 5);
        assert!(p.is_edge(&x, &y));
        assert_eq!(center_for_edge(&x, &y, &p).unwrap(), v(&[2, 2], 5));
    }

    #[test]
    fn center_small_example() {
        let p = GeomParams::new(3, 2).unwrap();
        // squared distance 5 is outside the band [1, 4]
        assert!(!p.is_edge(&v(&[1, 1], 3), &v(&[2, 3], 3)));
        let x = v(&[1, 2], 3);
        let y = v(&[2, 3], 3);
        let z = center_for_edge(&x, &y, &p).unwrap();
        // a = (1, 1): tie gives +1/2, then -1/2 opposes the partial sum
        assert_eq!(z, v(&[2, 2], 3));
        // |z-x|^2 = 1, |z-y|^2 = 1, within 3n/4 = 3/2 of mu/4 = 2/3
        assert!(p.in_shell(&x, &z) && p.in_shell(&y, &z));
        let z = center_for_edge(&v(&[1, 1], 3), &v(&[2, 1], 3), &p).unwrap();
        assert_eq!(z, v(&[2, 1], 3));
    }

    #[test]
    fn center_rejects_non_edge() {
        let p = GeomParams::new(3, 2).unwrap();
        assert!(matches!(
            center_for_edge(&v(&[1, 1], 3), &v(&[3, 3], 3), &p),
            Err(Error::NonEdge(..))
        ));
        assert!(center_for_edge(&v(&[1, 1], 3), &v(&[1, 1], 3), &p).is_err());
    }

    #[test]
    fn centre_membership_c3_n8_sampled() {
        let p = GeomParams::new(3, 8).unwrap();
        let mut rng = crate::seeded_rng(7);
        use rand::Rng;
        let mut checked = 0;
        while checked < 2000 {
            let x = LatticeVertex::from_index(rng.gen_range(0..6561), 3, 8);
            let y = LatticeVertex::from_index(rng.gen_range(0..6561), 3, 8);
            if !p.is_edge(&x, &y) {
                continue;
            }
            let z = center_for_edge(&x, &y, &p).unwrap();
            assert!(p.in_shell(&x, &z) && p.in_shell(&y, &z));
            checked += 1;
        }
    }

    #[test]
    fn shell_self_membership() {
        for c in 2..8u32 {
            let p = GeomParams::new(c, 2).unwrap();
            let z = v(&[1, 1], c);
            assert_eq!(p.in_shell(&z, &z), c <= 4, "C = {c}");
        }
    }

    #[test]
    fn shell_small_example() {
        let p = GeomParams::new(3, 2).unwrap();
        let s = shell(&v(&[2, 2], 3), &p, &Limits::default()).unwrap();
        assert_eq!(s, (0..9).collect::<Vec<_>>());
        let p0 = GeomParams::new(3, 0).unwrap();
        let z = LatticeVertex::new(vec![], 3).unwrap();
        assert_eq!(shell(&z, &p0, &Limits::default()).unwrap(), vec![0]);
    }

    #[test]
    fn antipodal_examples() {
        let x = v(&[1, 2, 3], 5);
        let z = v(&[2, 3, 3], 5);
        let antipode = v(&[3, 4, 3], 5);
        assert_eq!(antipodal_gap(&x, &antipode, &z), 0);
        assert_eq!(antipodal_gap(&x, &x, &z), 4 * x.sq_distance(&z));
    }

    #[test]
    fn antipodal_scan_small() {
        let p = GeomParams::new(3, 4).unwrap();
        let scan = antipodal_scan(&p, &(0..81).collect::<Vec<_>>(), &Limits::default()).unwrap();
        assert_eq!(scan.shells, 81);
        assert!(scan.pairs_checked > 0);
        assert!(scan.violations.is_empty());
        assert!(scan.max_gap <= 16);
        assert!((scan.max_shell_degree as f64) <= shell_degree_bound(4));
    }

    #[test]
    fn decompose_c2_n4() {
        let p = GeomParams::new(2, 4).unwrap();
        let d = decompose_geometric(&p, &Limits::default()).unwrap();
        let rep = verify_cover(&d.graph, &d.cover);
        assert!(rep.valid, "{:?}", rep.violations);
        let n = d.graph.n_vertices();
        assert!(d.cover.len() <= n * 2 * d.max_shell_degree * d.max_shell_degree);
    }

    #[test]
    fn exponents_formula() {
        let (g, f) = geometric_exponents(3);
        assert!((g - (2.0 - 1.0 / (162.0 * 3f64.ln()))).abs() < 1e-12);
        assert!((f - (1.0 + 2.0 * 10.5f64.ln() / 3f64.ln())).abs() < 1e-12);
    }
}
