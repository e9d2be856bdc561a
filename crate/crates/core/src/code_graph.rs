//! Graph on `[C]^n` joining points that agree on fewer than `d` coordinates,
//! covered by induced matchings built from a chain of proper binary codes.
//!
//! For an ordered pair `(a, b)` with agreement set `S`, a binary word `x` of
//! length `n - |S|` swaps `a_i` and `b_i` on the `j`-th coordinate outside
//! `S` whenever `x_j = 1` (the `x`-flip). Flipping by every codeword of the
//! chain code of length `n - |S|` gives an equivalence class of `2^k` ordered
//! pairs, i.e. `2^(k-1)` edges, and each class is an induced matching.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::codes::{binary_entropy, CodeChain};
use crate::graph::{is_induced_matching, norm, BipartiteGraph, Graph, Matching, MatchingCover};
use crate::lattice::{LatticeVertex, Limits, PointTable};
use crate::{Error, Result};

/// Parameters: alphabet `C`, length `n`, agreement threshold `d` and a code
/// chain of lengths `n, n-1, ..., n-d+1`.
#[derive(Clone, Debug)]
pub struct CodeGraphParams {
    c: u32,
    n: usize,
    d: usize,
    chain: CodeChain,
}

impl CodeGraphParams {
    pub fn new(c: u32, n: usize, d: usize, chain: CodeChain) -> Result<Self> {
        if c < 2 {
            return Err(Error::param(format!(
                "alphabet size C = {c} must be at least 2"
            )));
        }
        if d == 0 || d > n {
            return Err(Error::param(format!(
                "agreement threshold d = {d} outside 1..={n}"
            )));
        }
        if chain.len() != d || chain.n() != n {
            return Err(Error::param(format!(
                "chain has {} codes starting at length {}, need {d} starting at {n}",
                chain.len(),
                chain.n()
            )));
        }
        Ok(CodeGraphParams { c, n, d, chain })
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.chain.k()
    }

    pub fn chain(&self) -> &CodeChain {
        &self.chain
    }

    /// Size of every matching, `2^(k-1)`.
    pub fn matching_size(&self) -> usize {
        1 << (self.k() - 1)
    }

    /// `d / n >= 2 / (C - 1)`, the hypothesis of the simplified missing bound.
    pub fn hypothesis_holds(&self) -> bool {
        self.d * (self.c as usize - 1) >= 2 * self.n
    }
}

/// Edge iff the points agree on fewer than `d` coordinates.
pub fn build_code_graph(c: u32, n: usize, d: usize, limits: &Limits) -> Result<Graph> {
    let table = PointTable::new(c, n, limits)?;
    Ok(graph_from_table(d, &table))
}

fn graph_from_table(d: usize, table: &PointTable) -> Graph {
    Graph::from_predicate(table.len(), |u, v| {
        agreements(table.point(u), table.point(v)) < d
    })
}

#[inline]
fn agreements(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedPair {
    pub a: LatticeVertex,
    pub b: LatticeVertex,
}

impl OrderedPair {
    pub fn new(a: LatticeVertex, b: LatticeVertex) -> Result<Self> {
        if a == b {
            return Err(Error::param("ordered pair needs distinct points"));
        }
        if a.dim() != b.dim() {
            return Err(Error::param("points of different dimension"));
        }
        Ok(OrderedPair { a, b })
    }

    /// Agreement set `S`, ascending 0-based indices.
    pub fn agreement_set(&self) -> Vec<usize> {
        (0..self.a.dim())
            .filter(|&i| self.a.coords()[i] == self.b.coords()[i])
            .collect()
    }

    /// Coordinates outside `S`, ascending.
    pub fn disagreement_set(&self) -> Vec<usize> {
        (0..self.a.dim())
            .filter(|&i| self.a.coords()[i] != self.b.coords()[i])
            .collect()
    }

    pub fn ids(&self, c: u32) -> (usize, usize) {
        (self.a.index(c), self.b.index(c))
    }
}

/// The `x`-flip of `pr`: `x_j = 1` swaps the two points on the `j`-th
/// coordinate (ascending) outside the agreement set.
pub fn x_flip(pr: &OrderedPair, x: &[bool]) -> Result<OrderedPair> {
    let free = pr.disagreement_set();
    if x.len() != free.len() {
        return Err(Error::param(format!(
            "flip word has length {}, pair disagrees on {} coordinates",
            x.len(),
            free.len()
        )));
    }
    let mut c = pr.a.coords().to_vec();
    let mut d = pr.b.coords().to_vec();
    for (&i, _) in free.iter().zip(x).filter(|(_, &bit)| bit) {
        std::mem::swap(&mut c[i], &mut d[i]);
    }
    let bound = c.iter().chain(&d).copied().max().unwrap_or(1);
    Ok(OrderedPair {
        a: LatticeVertex::new(c, bound)?,
        b: LatticeVertex::new(d, bound)?,
    })
}

/// Per-coordinate id changes when swapping the free coordinates of a pair:
/// flipping by codeword `x` maps `(id_a, id_b)` to `(id_a + s, id_b - s)`
/// with `s` the sum of the deltas selected by `x`.
struct FlipDeltas {
    deltas: Vec<i64>,
}

impl FlipDeltas {
    fn new(a: &[u32], b: &[u32], c: u32) -> Self {
        let n = a.len();
        let mut weight = 1i64;
        let mut by_coord = vec![0i64; n];
        for i in (0..n).rev() {
            by_coord[i] = (b[i] as i64 - a[i] as i64) * weight;
            weight *= c as i64;
        }
        FlipDeltas {
            deltas: (0..n)
                .filter(|&i| a[i] != b[i])
                .map(|i| by_coord[i])
                .collect(),
        }
    }

    fn shift(&self, word: u64) -> i64 {
        self.deltas
            .iter()
            .enumerate()
            .filter(|(j, _)| word >> j & 1 == 1)
            .map(|(_, &d)| d)
            .sum()
    }
}

fn class_of(
    a: &[u32],
    b: &[u32],
    ida: usize,
    idb: usize,
    p: &CodeGraphParams,
) -> Vec<(usize, usize)> {
    let s = agreements(a, b);
    let code = p.chain.for_agreements(s).expect("edge agreement below d");
    let deltas = FlipDeltas::new(a, b, p.c);
    code.codewords()
        .into_iter()
        .map(|w| {
            let shift = deltas.shift(w);
            ((ida as i64 + shift) as usize, (idb as i64 - shift) as usize)
        })
        .collect()
}

/// Lexicographically least ordered pair in the class of `pr`.
pub fn class_canonical(pr: &OrderedPair, p: &CodeGraphParams) -> Result<OrderedPair> {
    if pr.a.dim() != p.n || agreements(pr.a.coords(), pr.b.coords()) >= p.d {
        let (u, v) = pr.ids(p.c);
        return Err(Error::NonEdge(u, v));
    }
    let (ida, idb) = pr.ids(p.c);
    let (x, y) = class_of(pr.a.coords(), pr.b.coords(), ida, idb, p)
        .into_iter()
        .min()
        .expect("class is never empty");
    Ok(OrderedPair {
        a: LatticeVertex::from_index(x, p.c, p.n),
        b: LatticeVertex::from_index(y, p.c, p.n),
    })
}

/// Graph plus its cover by flip classes.
#[derive(Clone, Debug)]
pub struct CodeConstruction {
    pub params: CodeGraphParams,
    pub graph: Graph,
    pub cover: MatchingCover,
}

/// One matching per equivalence class, in ascending order of canonical
/// pair. Each class is checked to have `2^k` ordered pairs and to be induced.
pub fn enumerate_cover(p: &CodeGraphParams, limits: &Limits) -> Result<CodeConstruction> {
    let table = PointTable::new(p.c, p.n, limits)?;
    let graph = graph_from_table(p.d, &table);
    let n_vertices = table.len();
    let class_size = 1usize << p.k();

    let per_vertex: Vec<Result<Vec<Matching>>> = (0..n_vertices)
        .into_par_iter()
        .map(|ida| {
            let a = table.point(ida);
            let mut found = Vec::new();
            for &idb in graph.neighbors(ida) {
                let b = table.point(idb);
                let class = class_of(a, b, ida, idb, p);
                if class.iter().any(|&pair| pair < (ida, idb)) {
                    continue;
                }
                let mut ordered = class.clone();
                ordered.sort_unstable();
                ordered.dedup();
                if ordered.len() != class_size {
                    return Err(Error::Verification(format!(
                        "class of ({ida}, {idb}) has {} ordered pairs, expected {class_size}",
                        ordered.len()
                    )));
                }
                let mut edges: Vec<_> = ordered.iter().map(|&(u, v)| norm(u, v)).collect();
                edges.sort_unstable();
                edges.dedup();
                let m = Matching::new(edges);
                if m.len() != class_size / 2 || !is_induced_matching(&graph, &m)? {
                    return Err(Error::Verification(format!(
                        "class of ({ida}, {idb}) is not an induced matching of {} edges",
                        class_size / 2
                    )));
                }
                found.push(m);
            }
            Ok(found)
        })
        .collect();

    let mut matchings = Vec::new();
    for part in per_vertex {
        matchings.extend(part?);
    }
    Ok(CodeConstruction {
        params: p.clone(),
        graph,
        cover: MatchingCover::new(matchings),
    })
}

/// Agreement certificate for one matching: every pair of endpoints taken
/// from two different edges agrees on at least `d` coordinates.
pub fn agreement_certificate(p: &CodeGraphParams, m: &Matching) -> bool {
    let pts: Vec<LatticeVertex> = m
        .edges()
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .map(|id| LatticeVertex::from_index(id, p.c, p.n))
        .collect();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            for x in &pts[2 * i..2 * i + 2] {
                for y in &pts[2 * j..2 * j + 2] {
                    if x.agreements(y) < p.d {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Bounds on the number of missing pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct MissingBound {
    /// `(1/2) C^n sum_{i=d}^{n} C(n,i) (C-1)^(n-i)`, exact.
    pub exact: BigRational,
    /// `C(n,d) C^n (C-1)^(n-d)`, reported only when `d/n >= 2/(C-1)`.
    pub simplified: Option<BigUint>,
    pub hypothesis_holds: bool,
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

pub fn missing_edge_count_bound(c: u32, n: usize, d: usize) -> MissingBound {
    let cm1 = BigUint::from(c - 1);
    let sum = (d..=n).fold(BigUint::zero(), |acc, i| {
        acc + binomial(n, i) * cm1.pow((n - i) as u32)
    });
    let cn = BigUint::from(c).pow(n as u32);
    let exact = BigRational::new((cn.clone() * sum).into(), 2.into());
    let hypothesis_holds = d * (c as usize - 1) >= 2 * n;
    let simplified = hypothesis_holds.then(|| binomial(n, d) * cn * cm1.pow((n - d) as u32));
    MissingBound {
        exact,
        simplified,
        hypothesis_holds,
    }
}

/// Two-subchannel split of `K_{N,N}`: left and right copies of `[C]^n`,
/// `(u, v)` in the first graph iff `uv` is a code-graph edge.
#[derive(Clone, Debug)]
pub struct TwoChannelSplit {
    pub first: BipartiteGraph,
    pub first_cover: MatchingCover,
    pub remainder: BipartiteGraph,
}

/// Image of an undirected matching in the left/right duplication: both
/// orientations of every edge.
pub(crate) fn bipartite_image(m: &Matching) -> Matching {
    let mut edges: Vec<_> = m
        .edges()
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();
    edges.sort_unstable();
    Matching::new(edges)
}

/// Left/right duplicate of an undirected graph.
pub(crate) fn double_cover(g: &Graph) -> Result<BipartiteGraph> {
    let n = g.n_vertices();
    BipartiteGraph::from_edges(n, n, g.edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)]))
}

pub fn two_channel_split(construction: &CodeConstruction) -> Result<TwoChannelSplit> {
    let n = construction.graph.n_vertices();
    let first = double_cover(&construction.graph)?;
    let matchings: Vec<Matching> = construction
        .cover
        .matchings()
        .iter()
        .map(bipartite_image)
        .collect();
    for (i, m) in matchings.iter().enumerate() {
        if !first.is_induced_matching(m)? {
            return Err(Error::Verification(format!(
                "bipartite image of matching {i} is not induced"
            )));
        }
    }
    let remainder = BipartiteGraph::from_edges(
        n,
        n,
        (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !first.has_edge(u, v)),
    )?;
    Ok(TwoChannelSplit {
        first,
        first_cover: MatchingCover::new(matchings),
        remainder,
    })
}

/// Exponents `(e, f)` with the `o(1)` terms dropped, `delta = d/n`:
/// `e = 1 + (H(delta) + (1 - delta) log2(C-1)) / log2 C` and
/// `f = 2 - (1 - H(delta)) / log2 C`.
pub fn code_exponents(c: f64, delta: f64) -> (f64, f64) {
    let h = binary_entropy(delta);
    let e = 1.0 + (h + (1.0 - delta) * (c - 1.0).log2()) / c.log2();
    let f = 2.0 - (1.0 - h) / c.log2();
    (e, f)
}
