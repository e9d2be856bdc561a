//! Shared directional multichannel: `N` transmitters, `N` receivers, the
//! pairs of `K_{N,N}` split among subchannels. In one round a subchannel
//! carries the messages of one induced matching of its graph.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;

use crate::code_graph::{
    bipartite_image, double_cover, enumerate_cover, two_channel_split, CodeGraphParams,
};
use crate::geometric::{decompose_geometric, GeomParams};
use crate::graph::{BipartiteGraph, Matching, MatchingCover};
use crate::io::parse_pair;
use crate::lattice::Limits;
use crate::{seeded_rng, Error, Result};

#[derive(Clone, Debug)]
pub struct Subchannel {
    pub graph: BipartiteGraph,
    pub cover: MatchingCover,
}

impl Subchannel {
    /// Every edge of `graph` as its own matching.
    pub fn singletons(graph: BipartiteGraph) -> Self {
        let cover = MatchingCover::new(
            graph
                .edges()
                .iter()
                .map(|&e| Matching::new(vec![e]))
                .collect(),
        );
        Subchannel { graph, cover }
    }
}

/// Subchannels whose edge sets partition `K_{N,N}`, each with a valid cover.
#[derive(Clone, Debug)]
pub struct ChannelPartition {
    n: usize,
    subchannels: Vec<Subchannel>,
}

impl ChannelPartition {
    pub fn new(n: usize, subchannels: Vec<Subchannel>) -> Result<Self> {
        let mut owner = vec![usize::MAX; n * n];
        for (i, s) in subchannels.iter().enumerate() {
            if s.graph.left_count() != n || s.graph.right_count() != n {
                return Err(Error::param(format!(
                    "subchannel {i} is not on {n}x{n} stations"
                )));
            }
            for &(u, v) in s.graph.edges() {
                let slot = &mut owner[u * n + v];
                if *slot != usize::MAX {
                    return Err(Error::Verification(format!(
                        "pair {u}>{v} in subchannels {} and {i}",
                        *slot
                    )));
                }
                *slot = i;
            }
            if !s.graph.verify_cover(&s.cover).valid {
                return Err(Error::Verification(format!(
                    "cover of subchannel {i} is invalid"
                )));
            }
        }
        if let Some(p) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Verification(format!(
                "pair {}>{} is in no subchannel",
                p / n,
                p % n
            )));
        }
        Ok(ChannelPartition { n, subchannels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subchannels(&self) -> &[Subchannel] {
        &self.subchannels
    }

    /// `t_i` for every subchannel.
    pub fn cover_sizes(&self) -> Vec<usize> {
        self.subchannels.iter().map(|s| s.cover.len()).collect()
    }
}

/// Code-graph subchannel plus a subchannel of singletons for the rest.
pub fn partition_two(p: &CodeGraphParams, limits: &Limits) -> Result<ChannelPartition> {
    let construction = enumerate_cover(p, limits)?;
    let split = two_channel_split(&construction)?;
    let n = construction.graph.n_vertices();
    ChannelPartition::new(
        n,
        vec![
            Subchannel {
                graph: split.first,
                cover: split.first_cover,
            },
            Subchannel::singletons(split.remainder),
        ],
    )
}

/// Partition from random right-relabelings of the geometric graph.
#[derive(Clone, Debug)]
pub struct ShiftPartition {
    pub partition: ChannelPartition,
    /// `perms[i][v]` is the right label of `v` in shift `i`.
    pub perms: Vec<Vec<usize>>,
    /// Pairs in no shift; they form the last subchannel when nonzero.
    pub overflow: usize,
    pub attempts_used: usize,
}

/// Draws `num_channels` right-label permutations per attempt, assigns each
/// pair to the first shift containing it and keeps the attempt with the
/// fewest unassigned pairs (stopping early at zero). Unassigned pairs go to
/// a trailing subchannel of singletons.
pub fn partition_shifts(
    p: &GeomParams,
    num_channels: usize,
    seed: u64,
    max_attempts: usize,
    limits: &Limits,
) -> Result<ShiftPartition> {
    if num_channels == 0 {
        return Err(Error::param("need at least one subchannel"));
    }
    if max_attempts == 0 {
        return Err(Error::param("need at least one attempt"));
    }
    let decomposition = decompose_geometric(p, limits)?;
    let base = double_cover(&decomposition.graph)?;
    let n = base.left_count();
    let mut rng = seeded_rng(seed);

    let mut best: Option<(usize, Vec<Vec<usize>>, Vec<u32>)> = None;
    let mut attempts_used = 0;
    for _ in 0..max_attempts {
        attempts_used += 1;
        let perms: Vec<Vec<usize>> = (0..num_channels)
            .map(|_| {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                perm
            })
            .collect();
        let owner = assign_pairs(&base, &perms);
        let overflow = owner.iter().filter(|&&o| o == u32::MAX).count();
        if best.as_ref().is_none_or(|(b, _, _)| overflow < *b) {
            best = Some((overflow, perms, owner));
        }
        if overflow == 0 {
            break;
        }
    }
    let (overflow, perms, owner) = best.expect("at least one attempt");

    let mut subchannels = Vec::with_capacity(num_channels + 1);
    for (i, perm) in perms.iter().enumerate() {
        let mine = |u: usize, w: usize| owner[u * n + w] == i as u32;
        let graph = BipartiteGraph::from_edges(
            n,
            n,
            base.edges()
                .iter()
                .map(|&(u, v)| (u, perm[v]))
                .filter(|&(u, w)| mine(u, w)),
        )?;
        let matchings: Vec<Matching> = decomposition
            .cover
            .matchings()
            .iter()
            .map(|m| {
                let mut edges: Vec<_> = bipartite_image(m)
                    .into_edges()
                    .into_iter()
                    .map(|(u, v)| (u, perm[v]))
                    .filter(|&(u, w)| mine(u, w))
                    .collect();
                edges.sort_unstable();
                Matching::new(edges)
            })
            .filter(|m| !m.is_empty())
            .collect();
        subchannels.push(Subchannel {
            graph,
            cover: MatchingCover::new(matchings),
        });
    }
    if overflow > 0 {
        let graph = BipartiteGraph::from_edges(
            n,
            n,
            (0..n * n)
                .filter(|&p| owner[p] == u32::MAX)
                .map(|p| (p / n, p % n)),
        )?;
        subchannels.push(Subchannel::singletons(graph));
    }
    Ok(ShiftPartition {
        partition: ChannelPartition::new(n, subchannels)?,
        perms,
        overflow,
        attempts_used,
    })
}

fn assign_pairs(base: &BipartiteGraph, perms: &[Vec<usize>]) -> Vec<u32> {
    let n = base.left_count();
    let mut owner = vec![u32::MAX; n * n];
    for (i, perm) in perms.iter().enumerate() {
        for &(u, v) in base.edges() {
            let slot = &mut owner[u * n + perm[v]];
            if *slot == u32::MAX {
                *slot = i as u32;
            }
        }
    }
    owner
}

/// One round: a matching of `(transmitter, receiver)` pairs on a subchannel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub channel: usize,
    pub matching: Matching,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub rounds: Vec<Round>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// All rounds of subchannel 0, then subchannel 1, and so on.
    Sequential,
    /// Round `j` of every subchannel before round `j + 1` of any.
    RoundRobin,
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn channel_count(&self) -> usize {
        self.rounds.iter().map(|r| r.channel + 1).max().unwrap_or(0)
    }

    pub fn per_channel_rounds(&self) -> Vec<usize> {
        let mut out = vec![0; self.channel_count()];
        for r in &self.rounds {
            out[r.channel] += 1;
        }
        out
    }

    /// Rounds when subchannels fire in parallel: `max_i t_i`.
    pub fn parallel_rounds(&self) -> usize {
        self.per_channel_rounds().into_iter().max().unwrap_or(0)
    }
}

pub fn build_schedule(cp: &ChannelPartition, policy: Policy) -> Schedule {
    let covers: Vec<&[Matching]> = cp.subchannels.iter().map(|s| s.cover.matchings()).collect();
    let mut rounds = Vec::new();
    match policy {
        Policy::Sequential => {
            for (channel, ms) in covers.iter().enumerate() {
                rounds.extend(ms.iter().map(|m| Round {
                    channel,
                    matching: m.clone(),
                }));
            }
        }
        Policy::RoundRobin => {
            let depth = covers.iter().map(|ms| ms.len()).max().unwrap_or(0);
            for j in 0..depth {
                for (channel, ms) in covers.iter().enumerate() {
                    if let Some(m) = ms.get(j) {
                        rounds.push(Round {
                            channel,
                            matching: m.clone(),
                        });
                    }
                }
            }
        }
    }
    Schedule { rounds }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    /// A receiver heard two or more in-channel transmitters.
    Interference,
    /// A transmitter was scheduled for two or more messages in one round.
    Overload,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GarbleEvent {
    pub round: usize,
    pub channel: usize,
    pub kind: EventKind,
    /// Receiver for interference, transmitter for overload.
    pub station: usize,
    /// Transmitters heard, or receivers addressed.
    pub peers: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimReport {
    pub delivered: usize,
    pub garbled_events: Vec<GarbleEvent>,
    /// Pairs delivered cleanly more than once (each listed once).
    pub double_deliveries: Vec<(usize, usize)>,
    pub rounds_used: usize,
    pub per_subchannel_rounds: Vec<usize>,
    pub parallel_rounds: usize,
}

/// Replays `s` on `n` stations. A subchannel's graph is the union of the
/// pairs scheduled on it. Within a round, receiver `v` of a scheduled pair
/// `(u, v)` hears every transmitter `u'` of the round with `(u', v)` in the
/// subchannel graph; the message gets through iff `u` is the only one and
/// `u` sends nothing else that round.
pub fn simulate(s: &Schedule, n: usize) -> Result<SimReport> {
    let channels = s.channel_count();
    let mut graphs: Vec<HashSet<(usize, usize)>> = vec![HashSet::new(); channels];
    for (i, r) in s.rounds.iter().enumerate() {
        for &(u, v) in r.matching.edges() {
            if u >= n || v >= n {
                return Err(Error::param(format!(
                    "round {i}: pair {u}>{v} outside {n} stations"
                )));
            }
            graphs[r.channel].insert((u, v));
        }
    }

    let mut delivered = vec![0u32; n * n];
    let mut events = Vec::new();
    for (idx, r) in s.rounds.iter().enumerate() {
        let graph = &graphs[r.channel];
        let mut transmitters: Vec<usize> = r.matching.edges().iter().map(|&(u, _)| u).collect();
        transmitters.sort_unstable();
        let mut overloaded = HashSet::new();
        for w in transmitters.windows(2).filter(|w| w[0] == w[1]) {
            if overloaded.insert(w[0]) {
                let mut peers: Vec<usize> = r
                    .matching
                    .edges()
                    .iter()
                    .filter(|&&(u, _)| u == w[0])
                    .map(|&(_, v)| v)
                    .collect();
                peers.sort_unstable();
                events.push(GarbleEvent {
                    round: idx,
                    channel: r.channel,
                    kind: EventKind::Overload,
                    station: w[0],
                    peers,
                });
            }
        }
        transmitters.dedup();

        let mut receivers: Vec<usize> = r.matching.edges().iter().map(|&(_, v)| v).collect();
        receivers.sort_unstable();
        receivers.dedup();
        let mut garbled_receivers = HashSet::new();
        for &v in &receivers {
            let heard: Vec<usize> = transmitters
                .iter()
                .copied()
                .filter(|&u| graph.contains(&(u, v)))
                .collect();
            if heard.len() > 1 {
                garbled_receivers.insert(v);
                events.push(GarbleEvent {
                    round: idx,
                    channel: r.channel,
                    kind: EventKind::Interference,
                    station: v,
                    peers: heard,
                });
            }
        }
        for &(u, v) in r.matching.edges() {
            if !garbled_receivers.contains(&v) && !overloaded.contains(&u) {
                delivered[u * n + v] += 1;
            }
        }
    }

    let double_deliveries = (0..n * n)
        .filter(|&p| delivered[p] > 1)
        .map(|p| (p / n, p % n))
        .collect();
    Ok(SimReport {
        delivered: delivered.iter().filter(|&&k| k > 0).count(),
        garbled_events: events,
        double_deliveries,
        rounds_used: s.len(),
        per_subchannel_rounds: s.per_channel_rounds(),
        parallel_rounds: s.parallel_rounds(),
    })
}

/// `N^(1 + 1/(2^C - 1))` with the unspecified constant taken as 1.
/// Heuristic: for reporting only.
pub fn meshulam_lower_bound(n: usize, channels: u32) -> Result<f64> {
    if channels == 0 || channels > 60 {
        return Err(Error::param(format!(
            "channel count {channels} outside 1..=60"
        )));
    }
    let exponent = 1.0 + 1.0 / ((1u64 << channels) - 1) as f64;
    Ok((n as f64).powf(exponent))
}

/// Lines `round <idx> chan <i>: u1>v1 u2>v2 ...`.
pub fn write_schedule<W: Write>(s: &Schedule, mut out: W) -> Result<()> {
    for (i, r) in s.rounds.iter().enumerate() {
        write!(out, "round {i} chan {}:", r.channel)?;
        for &(u, v) in r.matching.edges() {
            write!(out, " {u}>{v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_schedule<R: BufRead>(input: R) -> Result<Schedule> {
    let mut rounds = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::parse(idx + 1, msg.to_string());
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| bad("expected `round <idx> chan <i>: ...`"))?;
        let words: Vec<&str> = head.split_whitespace().collect();
        let (ordinal, channel) = match words.as_slice() {
            ["round", r, "chan", c] => (
                r.parse::<usize>().map_err(|_| bad("bad round index"))?,
                c.parse::<usize>().map_err(|_| bad("bad channel index"))?,
            ),
            _ => return Err(bad("expected `round <idx> chan <i>: ...`")),
        };
        if ordinal != rounds.len() {
            return Err(Error::parse(
                idx + 1,
                format!("round {ordinal}, expected {}", rounds.len()),
            ));
        }
        let edges = body
            .split_whitespace()
            .map(|tok| {
                parse_pair(tok, '>')
                    .ok_or_else(|| Error::parse(idx + 1, format!("bad pair `{tok}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        rounds.push(Round {
            channel,
            matching: Matching::new(edges),
        });
    }
    Ok(Schedule { rounds })
}
