//! Boolean functions over `F_2^m` and the graph linearity test: every vertex
//! gets an independent uniform point, every edge runs one BLR check.

use std::io::{BufRead, Write};

use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::Graph;
use crate::{seeded_rng, Error, Result};

/// Largest arity accepted for the Walsh transform.
pub const MAX_WALSH_ARITY: usize = 24;
const MAX_ARITY: usize = 30;

/// Truth table of `f: F_2^m -> F_2`; entry `x` is `f` at the point whose bit
/// `i` is coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanFunction {
    m: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(m: usize, table: Vec<bool>) -> Result<Self> {
        if m > MAX_ARITY {
            return Err(Error::param(format!("arity {m} exceeds {MAX_ARITY}")));
        }
        if table.len() != 1 << m {
            return Err(Error::param(format!(
                "table has {} entries, need 2^{m}",
                table.len()
            )));
        }
        Ok(BooleanFunction { m, table })
    }

    /// `x -> <mask, x>`.
    pub fn linear(m: usize, mask: u64) -> Result<Self> {
        Self::from_fn(m, |x| (x & mask).count_ones() % 2 == 1)
    }

    /// `x -> x_1 AND x_2`, ignoring the other coordinates.
    pub fn and_padded(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::param("AND needs arity at least 2"));
        }
        Self::from_fn(m, |x| x & 0b11 == 0b11)
    }

    pub fn random(m: usize, seed: u64) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        Self::from_fn(m, |_| rng.gen())
    }

    fn from_fn(m: usize, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        if m > MAX_ARITY {
            return Err(Error::param(format!("arity {m} exceeds {MAX_ARITY}")));
        }
        Ok(BooleanFunction {
            m,
            table: (0..1u64 << m).map(&mut f).collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: u64) -> bool {
        self.table[x as usize]
    }

    /// Mask of valid points.
    pub fn domain_mask(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    /// Parses `2^m` characters `0`/`1`; whitespace is ignored.
    pub fn parse_table(text: &str) -> Result<Self> {
        let table = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(
                    1,
                    format!("unexpected character `{other}` in truth table"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        if !table.len().is_power_of_two() {
            return Err(Error::parse(
                1,
                format!("truth table length {} is not a power of two", table.len()),
            ));
        }
        let m = table.len().trailing_zeros() as usize;
        Self::new(m, table)
    }

    pub fn read_table<R: BufRead>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        Self::parse_table(&text)
    }

    pub fn write_table<W: Write>(&self, mut out: W) -> Result<()> {
        let text: String = self
            .table
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        writeln!(out, "{text}")?;
        Ok(())
    }
}

/// In-place Walsh-Hadamard transform.
pub fn fwht(values: &mut [i64]) {
    let mut h = 1;
    while h < values.len() {
        for block in values.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// `d(f) = max_chi |P[f = chi] - P[f != chi]|` over all linear `chi`, exact
/// with denominator `2^m`.
pub fn walsh_correlation(f: &BooleanFunction) -> Result<Rational64> {
    if f.m > MAX_WALSH_ARITY {
        return Err(Error::ResourceLimit {
            what: "Walsh transform arity",
            requested: f.m as u128,
            cap: MAX_WALSH_ARITY as u128,
        });
    }
    let mut signs: Vec<i64> = f.table.iter().map(|&b| if b { -1 } else { 1 }).collect();
    fwht(&mut signs);
    let best = signs.iter().map(|w| w.abs()).max().unwrap_or(0);
    Ok(Rational64::new(best, 1 << f.m))
}

/// `f(x) + f(y) = f(x + y)`.
#[inline]
pub fn blr_trial(f: &BooleanFunction, x: u64, y: u64) -> bool {
    f.eval(x) ^ f.eval(y) == f.eval(x ^ y)
}

/// One run of the graph test: vertices draw points in id order from `rng`.
pub fn graph_test_with<R: Rng + ?Sized>(g: &Graph, f: &BooleanFunction, rng: &mut R) -> bool {
    let mask = f.domain_mask();
    let points: Vec<u64> = (0..g.n_vertices())
        .map(|_| rng.gen::<u64>() & mask)
        .collect();
    g.edges()
        .iter()
        .all(|&(u, v)| blr_trial(f, points[u], points[v]))
}

pub fn graph_test(g: &Graph, f: &BooleanFunction, seed: u64) -> bool {
    graph_test_with(g, f, &mut seeded_rng(seed))
}

/// Generator of trial `i` under `seed`: the seed's stream number `i`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Soundness {
    pub trials: u64,
    pub accepted: u64,
    pub p_hat: f64,
    /// Binomial standard error `sqrt(p (1 - p) / trials)`.
    pub stderr: f64,
}

/// Acceptance frequency over `trials` independent runs; run `i` uses
/// [`trial_rng`]`(seed, i)`, so the result does not depend on scheduling.
pub fn estimate_soundness(
    g: &Graph,
    f: &BooleanFunction,
    trials: u64,
    seed: u64,
) -> Result<Soundness> {
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    let accepted = (0..trials)
        .into_par_iter()
        .filter(|&i| graph_test_with(g, f, &mut trial_rng(seed, i)))
        .count() as u64;
    let p_hat = accepted as f64 / trials as f64;
    Ok(Soundness {
        trials,
        accepted,
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
    })
}

/// `e^(-rt/8) + d_f^(r/4)`.
pub fn hw_bound(r: usize, t: usize, d_f: f64) -> Result<f64> {
    if r == 0 || t == 0 {
        return Err(Error::param("r and t must be at least 1"));
    }
    if !(0.0..=1.0).contains(&d_f) {
        return Err(Error::param(format!("d(f) = {d_f} outside [0, 1]")));
    }
    Ok((-((r * t) as f64) / 8.0).exp() + d_f.powf(r as f64 / 4.0))
}

/// Upper estimates on the acceptance probability of the complete-graph test
/// on `n` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct MinBound {
    /// `2^(-C(n,2)) + d_f`.
    pub pairwise: f64,
    /// [`hw_bound`] for each supplied `(r, t)`, in order.
    pub graph_terms: Vec<f64>,
    pub min: f64,
}

/// Minimum of the pairwise term and the graph terms of the given `(r, t)`
/// instances, which must fit in `n` vertices.
pub fn min_bound(n: usize, d_f: f64, instances: &[(usize, usize)]) -> Result<MinBound> {
    if n < 2 {
        return Err(Error::param("need at least two vertices"));
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let pairwise = (-pairs).exp2() + d_f;
    let graph_terms = instances
        .iter()
        .map(|&(r, t)| {
            if 2 * r * t > n * (n - 1) {
                return Err(Error::param(format!(
                    "{r}x{t} matchings do not fit in {n} vertices"
                )));
            }
            hw_bound(r, t, d_f)
        })
        .collect::<Result<Vec<_>>>()?;
    let min = graph_terms.iter().copied().fold(pairwise, f64::min);
    Ok(MinBound {
        pairwise,
        graph_terms,
        min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlation_examples() {
        let f = BooleanFunction::linear(5, 0b10110).unwrap();
        assert_eq!(walsh_correlation(&f).unwrap(), Rational64::from_integer(1));
        let zero = BooleanFunction::new(3, vec![false; 8]).unwrap();
        assert_eq!(
            walsh_correlation(&zero).unwrap(),
            Rational64::from_integer(1)
        );
        let and = BooleanFunction::parse_table("0001").unwrap();
        assert_eq!(and, BooleanFunction::and_padded(2).unwrap());
        assert_eq!(walsh_correlation(&and).unwrap(), Rational64::new(1, 2));
    }

    #[test]
    fn blr_examples() {
        let and = BooleanFunction::and_padded(2).unwrap();
        assert!(!blr_trial(&and, 0b01, 0b10));
        assert!(blr_trial(&and, 0, 0));
        let one = BooleanFunction::new(1, vec![true, true]).unwrap();
        assert!(!blr_trial(&one, 0, 0));
    }

    #[test]
    fn linear_always_accepted() {
        let g = Graph::complete(6);
        let f = BooleanFunction::linear(6, 0b101).unwrap();
        let s = estimate_soundness(&g, &f, 200, 9).unwrap();
        assert_eq!(s.accepted, 200);
        assert!(graph_test(
            &Graph::empty(3),
            &BooleanFunction::and_padded(3).unwrap(),
            0
        ));
        assert!(estimate_soundness(&g, &f, 0, 0).is_err());
    }

    #[test]
    fn soundness_is_reproducible() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let f = BooleanFunction::and_padded(2).unwrap();
        let a = estimate_soundness(&g, &f, 4000, 3).unwrap();
        let b = estimate_soundness(&g, &f, 4000, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn table_text() {
        let f = BooleanFunction::and_padded(2).unwrap();
        let mut buf = Vec::new();
        f.write_table(&mut buf).unwrap();
        assert_eq!(buf, b"0001\n");
        assert_eq!(BooleanFunction::read_table(&buf[..]).unwrap(), f);
        assert!(BooleanFunction::parse_table("010").is_err());
        assert!(BooleanFunction::parse_table("01x1").is_err());
    }

    #[test]
    fn bound_examples() {
        let b = hw_bound(4, 2, 0.5).unwrap();
        assert!((b - ((-1f64).exp() + 0.5)).abs() < 1e-12);
        assert!((b - 0.867_879).abs() < 1e-6);
        assert!(hw_bound(3, 5, 1.0).unwrap() >= 1.0);
        assert!(hw_bound(4, 3, 0.5).unwrap() < b);
        assert!(hw_bound(8, 2, 0.5).unwrap() < b);
        assert!(hw_bound(0, 2, 0.5).is_err());
        assert!(hw_bound(2, 2, 1.5).is_err());
        let mb = min_bound(10, 0.5, &[(4, 2)]).unwrap();
        assert_eq!(mb.graph_terms, vec![b]);
        assert!(mb.min <= mb.pairwise);
        assert!(min_bound(4, 0.5, &[(3, 3)]).is_err());
    }
}
