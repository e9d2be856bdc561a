mod channel;
mod codes;
mod construct;
mod limits;
mod lintest;
mod vempala;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rsgraph::code_graph::CodeGraphParams;
use rsgraph::codes::{
    build_chain, gv_condition, gv_search, read_generator, LinearCode, MAX_ENUM_DIMENSION,
};
use rsgraph::io::{read_cover, read_edge_list};
use rsgraph::{Graph, Limits, MatchingCover};
use serde_json::{json, Value};

use crate::{
    ChannelCmd, Cli, CliError, CodeSource, CodesCmd, Command, ConstructCmd, GlobalArgs, LimitsCmd,
    Report,
};

pub(crate) fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Construct(ConstructCmd::Geometric(a)) => construct::geometric(g, a),
        Command::Construct(ConstructCmd::Shells(a)) => construct::shells(g, a),
        Command::Construct(ConstructCmd::Code(a)) => construct::code(g, a),
        Command::Codes(CodesCmd::Gv(a)) => codes::gv(g, a),
        Command::Codes(CodesCmd::Verify(a)) => codes::verify(a),
        Command::Limits(LimitsCmd::Triangle(a)) => limits::triangle(a),
        Command::Limits(LimitsCmd::Mindeg(a)) => limits::mindeg(a),
        Command::Channel(ChannelCmd::Two(a)) => channel::two(g, a),
        Command::Channel(ChannelCmd::Shifts(a)) => channel::shifts(g, a),
        Command::Channel(ChannelCmd::Simulate(a)) => channel::simulate(a),
        Command::Lintest(a) => lintest::run(g, a),
        Command::Vempala(a) => vempala::run(g, a),
    }
}

fn limits(g: &GlobalArgs) -> Limits {
    Limits {
        max_vertices: g.max_vertices,
        max_pair_checks: g.max_pair_checks,
    }
}

fn global_params(g: &GlobalArgs) -> Value {
    json!({
        "seed": g.seed,
        "max_vertices": g.max_vertices,
        "max_pair_checks": g.max_pair_checks,
    })
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))
}

/// Writes a file through `body` if a path was given.
fn write_to<F>(path: Option<&Path>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> rsgraph::Result<()>,
{
    if let Some(path) = path {
        let file = File::create(path)
            .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        body(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn load_graph_and_cover(edges: &Path, cover: &Path) -> Result<(Graph, MatchingCover), CliError> {
    Ok((read_edge_list(open(edges)?)?, read_cover(open(cover)?)?))
}

fn generator_rows(code: &LinearCode) -> Vec<String> {
    (0..code.n())
        .map(|i| {
            (0..code.k())
                .map(|j| if code.entry(i, j) { '1' } else { '0' })
                .collect()
        })
        .collect()
}

/// Code parameters from a generator file or a seeded search. The search
/// asks for distance above `d - 1` so the chain reaches length `n - d + 1`.
fn load_code(g: &GlobalArgs, src: &CodeSource) -> Result<(CodeGraphParams, Value), CliError> {
    if src.d == 0 || src.d > src.n {
        return Err(CliError::Usage(format!("--d must lie in 1..={}", src.n)));
    }
    let (code, source) = match &src.gen {
        Some(path) => {
            let code = read_generator(open(path)?)?;
            if code.n() != src.n {
                return Err(CliError::Usage(format!(
                    "generator has length {}, --n is {}",
                    code.n(),
                    src.n
                )));
            }
            (
                code,
                json!({ "kind": "file", "path": path.display().to_string() }),
            )
        }
        None => {
            let seed = src.gv_seed.unwrap_or(g.seed);
            let k = match src.k {
                Some(k) => k,
                None => (1..src.n.min(MAX_ENUM_DIMENSION + 1))
                    .rev()
                    .find(|&k| gv_condition(src.n, k, src.d - 1))
                    .ok_or_else(|| {
                        CliError::Usage(format!(
                            "no dimension passes the search gate for n = {}",
                            src.n
                        ))
                    })?,
            };
            let code = gv_search(src.n, k, src.d - 1, seed, src.tries)?;
            (
                code,
                json!({ "kind": "search", "gv_seed": seed, "tries": src.tries }),
            )
        }
    };
    let chain = build_chain(&code, src.d, None)?;
    let params = CodeGraphParams::new(src.c, src.n, src.d, chain)?;
    let value = json!({
        "c": src.c,
        "n": src.n,
        "d": src.d,
        "k": code.k(),
        "code_distance": params.chain().codes()[0].claimed_distance(),
        "generator": generator_rows(&code),
        "source": source,
    });
    Ok((params, value))
}
