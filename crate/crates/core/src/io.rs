//! Edge-list and cover text formats.
//!
//! Edge list: a header line `N M` followed by `M` lines `u v` with `u < v`,
//! in ascending order. Cover: one line per matching, `i: u1-v1 u2-v2 ...`,
//! with `i` the 0-based ordinal.

use std::io::{BufRead, Write};

use crate::graph::{Graph, Matching, MatchingCover};
use crate::{Error, Result};

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n_vertices(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input.lines().enumerate();
    let (n, m) = match lines.next() {
        Some((_, line)) => {
            let line = line?;
            parse_pair(&line, ' ').ok_or_else(|| Error::parse(1, "expected header `N M`"))?
        }
        None => return Err(Error::parse(1, "empty edge list")),
    };
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (u, v) =
            parse_pair(&line, ' ').ok_or_else(|| Error::parse(idx + 1, "expected `u v`"))?;
        if u >= v {
            return Err(Error::parse(
                idx + 1,
                format!("edge {u} {v} must have u < v"),
            ));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(
            1,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

pub fn write_cover<W: Write>(cover: &MatchingCover, mut out: W) -> Result<()> {
    for (i, m) in cover.matchings().iter().enumerate() {
        write!(out, "{i}:")?;
        for &(u, v) in m.edges() {
            write!(out, " {u}-{v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_cover<R: BufRead>(input: R) -> Result<MatchingCover> {
    let mut matchings = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(idx + 1, "expected `i: u-v ...`"))?;
        let ordinal: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::parse(idx + 1, "bad matching ordinal"))?;
        if ordinal != matchings.len() {
            return Err(Error::parse(
                idx + 1,
                format!("matching ordinal {ordinal}, expected {}", matchings.len()),
            ));
        }
        let edges = rest
            .split_whitespace()
            .map(|tok| {
                parse_pair(tok, '-')
                    .ok_or_else(|| Error::parse(idx + 1, format!("bad edge `{tok}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        matchings.push(Matching::new(edges));
    }
    Ok(MatchingCover::new(matchings))
}

pub(crate) fn parse_pair(s: &str, sep: char) -> Option<(usize, usize)> {
    let (a, b) = s.trim().split_once(sep)?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_exact_bytes() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1), (1, 2)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "4 3\n0 1\n1 2\n2 3\n"
        );
        let back = read_edge_list(&buf[..]).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn cover_exact_bytes() {
        let c = MatchingCover::new(vec![
            Matching::new(vec![(0, 1), (2, 3)]),
            Matching::new(vec![]),
            Matching::new(vec![(1, 2)]),
        ]);
        let mut buf = Vec::new();
        write_cover(&c, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "0: 0-1 2-3\n1:\n2: 1-2\n"
        );
        let back = read_cover(&buf[..]).unwrap();
        assert_eq!(back.matchings(), c.matchings());
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_edge_list(&b"3 1\n2 1\n"[..]).is_err());
        assert!(read_edge_list(&b"3 2\n0 1\n"[..]).is_err());
        assert!(read_edge_list(&b""[..]).is_err());
        assert!(read_cover(&b"1: 0-1\n"[..]).is_err());
        assert!(read_cover(&b"0: 0+1\n"[..]).is_err());
    }
}
