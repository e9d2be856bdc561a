//! Binary linear codes that contain the all-ones word ("proper" codes).
//!
//! A code of length `n <= 64` and dimension `k` is stored by the columns of
//! its `n x k` generator matrix, each column a bitmask with bit `i` holding
//! row `i`. Codewords use the same layout.

use std::io::{BufRead, Write};

use rand::Rng;

use crate::{Error, Result};

/// Largest dimension whose `2^k` codewords are enumerated.
pub const MAX_ENUM_DIMENSION: usize = 24;

/// Tries at extending a parity-check matrix before a sample is abandoned.
const MAX_EXTRA_CONSTRAINTS: usize = 256;

#[inline]
fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    columns: Vec<u64>,
    claimed_d: usize,
}

impl LinearCode {
    /// Code spanned by `columns`. Shape is checked here; rank, properness
    /// and distance are checked by [`verify_code`].
    pub fn from_columns(n: usize, columns: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::param(format!("code length {n} outside 1..=64")));
        }
        if columns.is_empty() {
            return Err(Error::param("generator needs at least one column"));
        }
        if columns.iter().any(|&c| c & !low_mask(n) != 0) {
            return Err(Error::param(format!(
                "generator column has bits beyond length {n}"
            )));
        }
        Ok(LinearCode {
            n,
            columns,
            claimed_d: 0,
        })
    }

    /// Length-`n` repetition code `{0^n, 1^n}`.
    pub fn repetition(n: usize) -> Result<Self> {
        Ok(Self::from_columns(n, vec![low_mask(n.min(64))])?.with_claimed_distance(n))
    }

    pub fn with_claimed_distance(mut self, d: usize) -> Self {
        self.claimed_d = d;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn claimed_distance(&self) -> usize {
        self.claimed_d
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn all_ones(&self) -> u64 {
        low_mask(self.n)
    }

    /// Generator entry at row `i`, column `j`.
    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.columns[j] >> i & 1 == 1
    }

    /// `G x` for the message whose bit `j` selects column `j`.
    pub fn encode(&self, message: u64) -> u64 {
        self.columns
            .iter()
            .enumerate()
            .filter(|(j, _)| message >> j & 1 == 1)
            .fold(0, |acc, (_, &c)| acc ^ c)
    }

    /// All `2^k` encodings, message order (Gray-code walk).
    pub fn codewords(&self) -> Vec<u64> {
        let k = self.k();
        let mut out = vec![0u64; 1 << k];
        for m in 1usize..1 << k {
            let low = m.trailing_zeros() as usize;
            out[m] = out[m & (m - 1)] ^ self.columns[low];
        }
        out
    }
}

/// Outcome of [`verify_code`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeCheck {
    pub is_proper: bool,
    /// Minimum weight of a nonzero codeword, `None` if there is none.
    pub true_distance: Option<usize>,
    pub rank: usize,
}

impl CodeCheck {
    /// Proper, full rank `k`, and distance at least `d`.
    pub fn meets(&self, k: usize, d: usize) -> bool {
        self.is_proper && self.rank == k && self.true_distance.is_some_and(|t| t >= d)
    }
}

/// Exhaustive check over all `2^k` codewords plus a GF(2) rank computation.
pub fn verify_code(c: &LinearCode) -> Result<CodeCheck> {
    if c.k() > MAX_ENUM_DIMENSION {
        return Err(Error::ResourceLimit {
            what: "code dimension",
            requested: c.k() as u128,
            cap: MAX_ENUM_DIMENSION as u128,
        });
    }
    let ones = c.all_ones();
    let mut is_proper = false;
    let mut distance: Option<usize> = None;
    for w in c.codewords() {
        if w == ones {
            is_proper = true;
        }
        if w != 0 {
            let wt = w.count_ones() as usize;
            distance = Some(distance.map_or(wt, |d| d.min(wt)));
        }
    }
    Ok(CodeCheck {
        is_proper,
        true_distance: distance,
        rank: rank(c.columns()),
    })
}

/// Rank over GF(2) of a set of bit vectors.
pub fn rank(vectors: &[u64]) -> usize {
    reduced_echelon(vectors.to_vec()).len()
}

/// Reduced row echelon basis of the span of `vectors`, pivot = lowest set
/// bit, rows sorted by pivot. The result depends only on the span.
fn reduced_echelon(mut rows: Vec<u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for row in rows.drain(..) {
        let mut r = row;
        for &b in &basis {
            if r >> b.trailing_zeros() & 1 == 1 {
                r ^= b;
            }
        }
        if r != 0 {
            let p = r.trailing_zeros();
            for b in basis.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= r;
                }
            }
            basis.push(r);
        }
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    basis
}

/// Null space basis of the parity-check matrix with the given rows, each an
/// `n`-bit mask, in reduced echelon form.
pub fn kernel(check_rows: &[u64], n: usize) -> Vec<u64> {
    let pivots_rows = reduced_echelon(check_rows.to_vec());
    let pivots: Vec<usize> = pivots_rows
        .iter()
        .map(|r| r.trailing_zeros() as usize)
        .collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = 1u64 << free;
        for (row, &p) in pivots_rows.iter().zip(&pivots) {
            if row >> free & 1 == 1 {
                v |= 1 << p;
            }
        }
        basis.push(v);
    }
    reduced_echelon(basis)
}

/// Random `(n - k) x n` parity-check matrix, rows as `n`-bit masks. The first
/// `n - 1` columns are uniform; the last is the parity of the others, so the
/// all-ones word satisfies every check.
pub fn sample_parity_check<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<u64> {
    (0..n - k).map(|_| even_row(n, rng)).collect()
}

fn even_row<R: Rng + ?Sized>(n: usize, rng: &mut R) -> u64 {
    let body = rng.gen::<u64>() & low_mask(n - 1);
    body | ((body.count_ones() as u64 & 1) << (n - 1))
}

/// `sum_{i=0}^{d} C(n, i)`.
pub fn ball_volume(n: usize, d: usize) -> u128 {
    let mut term: u128 = 1;
    let mut total: u128 = 1;
    for i in 1..=d.min(n) {
        term = term * (n - i + 1) as u128 / i as u128;
        total += term;
    }
    total
}

/// The existence gate `sum_{i<=d} C(n,i) < 2^{n-k}`.
pub fn gv_condition(n: usize, k: usize, d: usize) -> bool {
    n > k && (n - k) < 128 && ball_volume(n, d) < 1u128 << (n - k)
}

/// Randomized search for a proper `[n, k]` code of distance greater than `d`.
///
/// Each try samples a parity-check matrix with [`sample_parity_check`]; while
/// its kernel is larger than `k`, random checks keeping the all-ones word are
/// appended. The kernel basis is the generator (reduced echelon form) and the
/// distance is verified by enumeration.
pub fn gv_search(n: usize, k: usize, d: usize, seed: u64, max_tries: usize) -> Result<LinearCode> {
    if k == 0 || n > 64 || k > MAX_ENUM_DIMENSION {
        return Err(Error::param(format!(
            "need 1 <= k <= {MAX_ENUM_DIMENSION} and n <= 64, got n = {n}, k = {k}"
        )));
    }
    if !gv_condition(n, k, d) {
        return Err(Error::param(format!(
            "sum_(i<={d}) C({n},i) = {} is not below 2^({n}-{k})",
            ball_volume(n, d)
        )));
    }
    let mut rng = crate::seeded_rng(seed);
    for _ in 0..max_tries {
        let mut checks = sample_parity_check(n, k, &mut rng);
        let mut basis = kernel(&checks, n);
        let mut extra = 0;
        while basis.len() > k && extra < MAX_EXTRA_CONSTRAINTS {
            checks.push(even_row(n, &mut rng));
            basis = kernel(&checks, n);
            extra += 1;
        }
        if basis.len() != k || !distance_exceeds(&basis, d) {
            continue;
        }
        let code = LinearCode::from_columns(n, basis)?;
        let check = verify_code(&code)?;
        if check.meets(k, d + 1) {
            let dist = check.true_distance.unwrap_or(0);
            return Ok(code.with_claimed_distance(dist));
        }
    }
    Err(Error::SearchExhausted { tries: max_tries })
}

fn distance_exceeds(basis: &[u64], d: usize) -> bool {
    if basis.len() > MAX_ENUM_DIMENSION {
        // too many words to enumerate yet; decided once the kernel shrinks
        return true;
    }
    let mut w = 0u64;
    for m in 1usize..1 << basis.len() {
        w ^= basis[m.trailing_zeros() as usize];
        // Gray code: w is the codeword of m ^ (m >> 1)
        if (w.count_ones() as usize) <= d {
            return false;
        }
    }
    true
}

/// Deletes generator row `row`. Needs a claimed distance above 1 so the
/// dimension cannot collapse; the claimed distance drops by one.
pub fn delete_row(c: &LinearCode, row: usize) -> Result<LinearCode> {
    if c.claimed_d <= 1 {
        return Err(Error::param(format!(
            "row deletion needs distance > 1, code claims {}",
            c.claimed_d
        )));
    }
    if row >= c.n {
        return Err(Error::param(format!("row {row} outside length {}", c.n)));
    }
    if c.n == 1 {
        return Err(Error::param("cannot delete the only row"));
    }
    let low = low_mask(row);
    let columns = c
        .columns
        .iter()
        .map(|&col| (col & low) | ((col >> (row + 1)) << row))
        .collect();
    Ok(LinearCode::from_columns(c.n - 1, columns)?.with_claimed_distance(c.claimed_d - 1))
}

/// Codes of lengths `n, n-1, ..., n-d+1`, all of dimension `k`, slot `j`
/// with distance at least `d - j`.
#[derive(Clone, Debug)]
pub struct CodeChain {
    codes: Vec<LinearCode>,
}

impl CodeChain {
    pub fn codes(&self) -> &[LinearCode] {
        &self.codes
    }

    /// Number of slots, i.e. the agreement threshold `d` the chain serves.
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn k(&self) -> usize {
        self.codes[0].k()
    }

    pub fn n(&self) -> usize {
        self.codes[0].n()
    }

    /// Code used for pairs agreeing on `agreements` coordinates: the one of
    /// length `n - agreements`.
    pub fn for_agreements(&self, agreements: usize) -> Option<&LinearCode> {
        self.codes.get(agreements)
    }
}

/// Deletes one row at a time, `row_order[j]` being the index (in the current
/// code) removed at step `j`; the default removes the last row each time.
/// Every code in the chain is verified.
pub fn build_chain(c: &LinearCode, d: usize, row_order: Option<&[usize]>) -> Result<CodeChain> {
    if d == 0 || d > c.n() {
        return Err(Error::param(format!(
            "chain depth {d} outside 1..={}",
            c.n()
        )));
    }
    let first = verify_code(c)?;
    if !first.meets(c.k(), d) {
        return Err(Error::param(format!(
            "base code is not a proper [{}, {}, >= {d}] code: {first:?}",
            c.n(),
            c.k()
        )));
    }
    if let Some(order) = row_order {
        if order.len() != d - 1 {
            return Err(Error::param(format!(
                "row order needs {} entries, got {}",
                d - 1,
                order.len()
            )));
        }
    }
    let k = c.k();
    let mut codes = vec![c
        .clone()
        .with_claimed_distance(first.true_distance.unwrap_or(0))];
    for j in 1..d {
        let prev = &codes[j - 1];
        let row = row_order.map_or(prev.n() - 1, |o| o[j - 1]);
        let next = delete_row(prev, row)?;
        let check = verify_code(&next)?;
        if !check.meets(k, d - j) {
            return Err(Error::Verification(format!(
                "chain slot {j} (length {}) lost properness, rank or distance: {check:?}",
                next.n()
            )));
        }
        codes.push(next);
    }
    Ok(CodeChain { codes })
}

/// Binary entropy `H(x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Asymptotic Gilbert-Varshamov rate `1 - H(d/n)`, for information only.
pub fn gv_rate(n: usize, d: usize) -> f64 {
    1.0 - binary_entropy(d as f64 / n as f64)
}

/// Generator file: header `n k`, then `n` lines of `k` characters `0`/`1`.
pub fn write_generator<W: Write>(c: &LinearCode, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", c.n(), c.k())?;
    for i in 0..c.n() {
        let line: String = (0..c.k())
            .map(|j| if c.entry(i, j) { '1' } else { '0' })
            .collect();
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_generator<R: BufRead>(input: R) -> Result<LinearCode> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty generator file"))??;
    let (n, k) =
        crate::io::parse_pair(&header, ' ').ok_or_else(|| Error::parse(1, "expected `n k`"))?;
    if n == 0 || n > 64 || k == 0 || k > 64 {
        return Err(Error::parse(1, format!("unsupported shape {n} x {k}")));
    }
    let mut columns = vec![0u64; k];
    let mut rows = 0;
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if rows == n {
            return Err(Error::parse(idx + 2, "more rows than declared"));
        }
        if line.len() != k {
            return Err(Error::parse(
                idx + 2,
                format!("expected {k} bits, got {}", line.len()),
            ));
        }
        for (j, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => columns[j] |= 1 << rows,
                other => return Err(Error::parse(idx + 2, format!("bad bit `{other}`"))),
            }
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::parse(1, format!("declared {n} rows, found {rows}")));
    }
    LinearCode::from_columns(n, columns)
}
