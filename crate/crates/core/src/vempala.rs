//! The partition sum `sum_{i,j} min(1, sum_p p_i p_j / |p|)` over a partition
//! of the pairs of `K_{N,k}`, and the partition built from the code graph
//! that keeps it small.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::code_graph::{enumerate_cover, two_channel_split, CodeGraphParams};
use crate::graph::BipartiteGraph;
use crate::io::parse_pair;
use crate::lattice::Limits;
use crate::{Error, Result};

/// Sparse `(vertex, degree)` list.
pub type Degrees = Vec<(usize, u64)>;

/// Parts of `N x k` pairs `(i, j)`, `i` on the left. Every pair lies in
/// exactly one part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition {
    left: usize,
    right: usize,
    parts: Vec<Vec<(usize, usize)>>,
}

impl EdgePartition {
    pub fn new(left: usize, right: usize, parts: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let mut seen = vec![false; left * right];
        for (id, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::param(format!("part {id} is empty")));
            }
            for &(i, j) in part {
                if i >= left || j >= right {
                    return Err(Error::param(format!(
                        "part {id}: pair {i}>{j} outside {left}x{right}"
                    )));
                }
                if std::mem::replace(&mut seen[i * right + j], true) {
                    return Err(Error::param(format!("pair {i}>{j} appears twice")));
                }
            }
        }
        if let Some(p) = seen.iter().position(|&s| !s) {
            return Err(Error::param(format!(
                "pair {}>{} is in no part",
                p / right,
                p % right
            )));
        }
        Ok(EdgePartition { left, right, parts })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn parts(&self) -> &[Vec<(usize, usize)>] {
        &self.parts
    }

    /// `(p_i for left i, p_j for right j)` as sparse `(vertex, degree)` lists.
    pub fn degrees(&self, part: usize) -> (Degrees, Degrees) {
        let edges = &self.parts[part];
        (
            tally(edges.iter().map(|&(i, _)| i)),
            tally(edges.iter().map(|&(_, j)| j)),
        )
    }
}

fn tally(ids: impl Iterator<Item = usize>) -> Vec<(usize, u64)> {
    let mut v: Vec<usize> = ids.collect();
    v.sort_unstable();
    let mut out: Vec<(usize, u64)> = Vec::new();
    for id in v {
        match out.last_mut() {
            Some((last, count)) if *last == id => *count += 1,
            _ => out.push((id, 1)),
        }
    }
    out
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of the partition sum.
pub fn vempala_sum(ep: &EdgePartition) -> BigRational {
    // per left vertex: (part, p_i)
    let mut by_left: Vec<Vec<(usize, u64)>> = vec![Vec::new(); ep.left];
    let mut right_degrees = Vec::with_capacity(ep.parts.len());
    for id in 0..ep.parts.len() {
        let (l, r) = ep.degrees(id);
        for (i, d) in l {
            by_left[i].push((id, d));
        }
        right_degrees.push(r);
    }
    let rows: Vec<BigRational> = by_left
        .par_iter()
        .map(|parts| {
            let mut row = vec![BigRational::zero(); ep.right];
            for &(id, pi) in parts {
                let size = ep.parts[id].len() as u64;
                for &(j, pj) in &right_degrees[id] {
                    row[j] += ratio(pi * pj, size);
                }
            }
            row.into_iter()
                .map(|s| {
                    if s > BigRational::one() {
                        BigRational::one()
                    } else {
                        s
                    }
                })
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    rows.into_iter().fold(BigRational::zero(), |a, b| a + b)
}

/// `sum_{(i,j) in h} p_i p_j / |p|` for one part.
pub fn part_h_contribution(ep: &EdgePartition, part: usize, h: &BipartiteGraph) -> BigRational {
    let (l, r) = ep.degrees(part);
    let size = ep.parts[part].len() as u64;
    let mut total = BigRational::zero();
    for &(i, pi) in &l {
        for &(j, pj) in &r {
            if h.has_edge(i, j) {
                total += ratio(pi * pj, size);
            }
        }
    }
    total
}

/// Partition of `N x N`: one part per induced matching of the doubled code
/// graph `H`, then one singleton per pair outside `H`.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub partition: EdgePartition,
    pub h: BipartiteGraph,
    pub matching_parts: usize,
    pub missing_pairs: usize,
}

pub fn counterexample_partition(p: &CodeGraphParams, limits: &Limits) -> Result<Counterexample> {
    let construction = enumerate_cover(p, limits)?;
    let split = two_channel_split(&construction)?;
    let n = construction.graph.n_vertices();
    let matching_parts = split.first_cover.len();
    let missing_pairs = split.remainder.edge_count();
    let parts = split
        .first_cover
        .into_matchings()
        .into_iter()
        .map(|m| m.into_edges())
        .chain(split.remainder.edges().iter().map(|&e| vec![e]))
        .collect();
    Ok(Counterexample {
        partition: EdgePartition::new(n, n, parts)?,
        h: split.first,
        matching_parts,
        missing_pairs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub sum: BigRational,
    pub sum_value: f64,
    /// `N k / ln N` (constant 1, natural log).
    pub threshold: f64,
    pub refutes: bool,
}

/// Compares the sum against `N k / ln N`. Requires `N = k >= 2`.
pub fn conjecture_verdict(ep: &EdgePartition) -> Result<Verdict> {
    if ep.left != ep.right {
        return Err(Error::param(format!(
            "verdict needs N = k, got {} and {}",
            ep.left, ep.right
        )));
    }
    if ep.left < 2 {
        return Err(Error::param("verdict is degenerate for N = 1 (ln 1 = 0)"));
    }
    let sum = vempala_sum(ep);
    let n = ep.left as f64;
    let threshold = n * ep.right as f64 / n.ln();
    let sum_value = sum.to_f64().expect("finite sum");
    Ok(Verdict {
        refutes: sum_value < threshold,
        sum,
        sum_value,
        threshold,
    })
}

/// Lines `part <id>: u>v u>v ...`.
pub fn write_partition<W: Write>(ep: &EdgePartition, mut out: W) -> Result<()> {
    for (id, part) in ep.parts.iter().enumerate() {
        write!(out, "part {id}:")?;
        for &(i, j) in part {
            write!(out, " {i}>{j}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Reads a partition of `left x right` pairs.
pub fn read_partition<R: BufRead>(input: R, left: usize, right: usize) -> Result<EdgePartition> {
    let mut parts = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(idx + 1, "expected `part <id>: ...`"))?;
        let id = head
            .trim()
            .strip_prefix("part")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::parse(idx + 1, "expected `part <id>`"))?;
        if id != parts.len() {
            return Err(Error::parse(
                idx + 1,
                format!("part {id}, expected {}", parts.len()),
            ));
        }
        parts.push(
            body.split_whitespace()
                .map(|tok| {
                    parse_pair(tok, '>')
                        .ok_or_else(|| Error::parse(idx + 1, format!("bad pair `{tok}`")))
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    EdgePartition::new(left, right, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_chain, LinearCode};

    fn singletons(n: usize, k: usize) -> EdgePartition {
        let parts = (0..n)
            .flat_map(|i| (0..k).map(move |j| vec![(i, j)]))
            .collect();
        EdgePartition::new(n, k, parts).unwrap()
    }

    #[test]
    fn trivial_partitions() {
        assert_eq!(
            vempala_sum(&singletons(3, 2)),
            BigRational::from_integer(6.into())
        );
        let whole = EdgePartition::new(
            3,
            2,
            vec![(0..3).flat_map(|i| (0..2).map(move |j| (i, j))).collect()],
        )
        .unwrap();
        assert_eq!(vempala_sum(&whole), BigRational::from_integer(6.into()));
    }

    #[test]
    fn sum_caps_at_one() {
        let ep =
            EdgePartition::new(2, 2, vec![vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]).unwrap();
        // every pair gets 1/2 from each of the two parts
        assert_eq!(vempala_sum(&ep), BigRational::from_integer(4.into()));
        let ep = EdgePartition::new(1, 2, vec![vec![(0, 0), (0, 1)]]).unwrap();
        // p_0 = 2, p_j = 1, |p| = 2
        assert_eq!(vempala_sum(&ep), BigRational::from_integer(2.into()));
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(EdgePartition::new(2, 1, vec![vec![(0, 0)]]).is_err());
        assert!(EdgePartition::new(1, 1, vec![vec![(0, 0)], vec![(0, 0)]]).is_err());
        assert!(EdgePartition::new(1, 1, vec![vec![(0, 1)]]).is_err());
    }

    #[test]
    fn verdicts() {
        let v = conjecture_verdict(&singletons(3, 3)).unwrap();
        assert!(!v.refutes);
        assert!(conjecture_verdict(&singletons(1, 1)).is_err());
        assert!(conjecture_verdict(&singletons(3, 2)).is_err());
    }

    #[test]
    fn small_counterexample() {
        let chain = build_chain(&LinearCode::repetition(2).unwrap(), 1, None).unwrap();
        let p = CodeGraphParams::new(2, 2, 1, chain).unwrap();
        let ce = counterexample_partition(&p, &Limits::default()).unwrap();
        assert_eq!(ce.matching_parts, 2);
        assert_eq!(ce.missing_pairs, 12);
        assert_eq!(ce.partition.parts().len(), 14);
        for id in 0..ce.matching_parts {
            assert_eq!(
                part_h_contribution(&ce.partition, id, &ce.h),
                BigRational::one()
            );
        }
        for v in 0..4 {
            assert!(ce.partition.parts().contains(&vec![(v, v)]));
        }
    }

    #[test]
    fn partition_file_roundtrip() {
        let ep = EdgePartition::new(2, 2, vec![vec![(0, 0), (1, 1)], vec![(0, 1)], vec![(1, 0)]])
            .unwrap();
        let mut buf = Vec::new();
        write_partition(&ep, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "part 0: 0>0 1>1\npart 1: 0>1\npart 2: 1>0\n"
        );
        assert_eq!(read_partition(&buf[..], 2, 2).unwrap(), ep);
        assert!(read_partition(&b"part 1: 0>0\n"[..], 1, 1).is_err());
    }
}
