//! Points of `[C]^n` and their dense integer ids.

use crate::{Error, Result};

/// Resource caps applied before any all-pairs work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_pair_checks: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 100_000,
            max_pair_checks: 100_000_000,
        }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits {
            max_vertices: usize::MAX,
            max_pair_checks: u64::MAX,
        }
    }

    /// Refuses vertex counts above the cap, and all-pairs sweeps whose
    /// unordered pair count exceeds the pair-check cap.
    pub fn check_all_pairs(&self, vertices: u128) -> Result<usize> {
        if vertices > self.max_vertices as u128 {
            return Err(Error::ResourceLimit {
                what: "vertex count",
                requested: vertices,
                cap: self.max_vertices as u128,
            });
        }
        let pairs = vertices * vertices.saturating_sub(1) / 2;
        if pairs > self.max_pair_checks as u128 {
            return Err(Error::ResourceLimit {
                what: "pair checks",
                requested: pairs,
                cap: self.max_pair_checks as u128,
            });
        }
        Ok(vertices as usize)
    }
}

/// A point of `[C]^n`; coordinates are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVertex {
    coords: Vec<u32>,
}

impl LatticeVertex {
    /// Checks every coordinate lies in `[1, c]`.
    pub fn new(coords: Vec<u32>, c: u32) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|&&x| x < 1 || x > c) {
            return Err(Error::param(format!("coordinate {bad} outside [1, {c}]")));
        }
        Ok(LatticeVertex { coords })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Mixed-radix id: the first coordinate is the most significant digit,
    /// digit value `coord - 1`.
    pub fn index(&self, c: u32) -> usize {
        self.coords
            .iter()
            .fold(0usize, |acc, &x| acc * c as usize + (x - 1) as usize)
    }

    /// Inverse of [`LatticeVertex::index`].
    pub fn from_index(mut id: usize, c: u32, n: usize) -> Self {
        let mut coords = vec![0u32; n];
        for slot in coords.iter_mut().rev() {
            *slot = (id % c as usize) as u32 + 1;
            id /= c as usize;
        }
        LatticeVertex { coords }
    }

    pub fn sq_distance(&self, other: &LatticeVertex) -> i64 {
        sq_distance(&self.coords, &other.coords)
    }

    /// Number of coordinates on which the two points agree.
    pub fn agreements(&self, other: &LatticeVertex) -> usize {
        self.coords
            .iter()
            .zip(&other.coords)
            .filter(|(a, b)| a == b)
            .count()
    }
}

pub(crate) fn sq_distance(x: &[u32], y: &[u32]) -> i64 {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            let d = a as i64 - b as i64;
            d * d
        })
        .sum()
}

/// `C^n` as an exact integer, `None` on overflow.
pub fn lattice_size(c: u32, n: usize) -> Option<u128> {
    (c as u128).checked_pow(n as u32)
}

/// All points of `[C]^n` in id order, flattened row-major (`n` digits per
/// point).
pub(crate) fn all_points(c: u32, n: usize, count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count * n);
    let mut digits = vec![1u32; n];
    for _ in 0..count {
        out.extend_from_slice(&digits);
        for slot in digits.iter_mut().rev() {
            if *slot < c {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    out
}

/// Coordinates of every point of `[C]^n`, indexed by id.
#[derive(Clone, Debug)]
pub(crate) struct PointTable {
    n: usize,
    coords: Vec<u32>,
}

impl PointTable {
    pub(crate) fn new(c: u32, n: usize, limits: &Limits) -> Result<Self> {
        let size = lattice_size(c, n).unwrap_or(u128::MAX);
        let count = limits.check_all_pairs(size)?;
        Ok(PointTable {
            n,
            coords: all_points(c, n, count),
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.coords.len().checked_div(self.n).unwrap_or(1)
    }

    #[inline]
    pub(crate) fn point(&self, id: usize) -> &[u32] {
        &self.coords[id * self.n..(id + 1) * self.n]
    }
}
