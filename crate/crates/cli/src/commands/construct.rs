use rand::seq::index::sample;
use rsgraph::code_graph::{
    agreement_certificate, code_exponents, enumerate_cover, missing_edge_count_bound,
};
use rsgraph::geometric::{
    antipodal_scan, decompose_geometric, geometric_exponents, missing_edge_bound,
    shell_degree_bound, GeomParams,
};
use rsgraph::graph::verify_cover;
use rsgraph::io::{write_cover, write_edge_list};
use rsgraph::seeded_rng;
use serde_json::{json, Value};

use super::{global_params, limits, load_code, write_to};
use crate::report::ratio;
use crate::{CliError, CodeConstructArgs, GeometricArgs, GlobalArgs, Report, ShellsArgs};

pub(super) fn geometric(g: &GlobalArgs, a: &GeometricArgs) -> Result<Report, CliError> {
    let p = GeomParams::new(a.c, a.n)?;
    let dec = decompose_geometric(&p, &limits(g))?;
    let n = dec.graph.n_vertices();
    let report = verify_cover(&dec.graph, &dec.cover);
    let d_max = dec.graph.max_degree();
    let t_bound = n as u128 * 2 * (d_max as u128).pow(2);
    write_to(a.outputs.out.as_deref(), |w| write_edge_list(&dec.graph, w))?;
    write_to(a.outputs.cover.as_deref(), |w| write_cover(&dec.cover, w))?;
    let (ge, fe) = geometric_exponents(a.c);
    let result = json!({
        "N": n,
        "edges": dec.graph.edge_count(),
        "missing": dec.graph.missing_edge_count(),
        "mu": ratio(&p.mu()),
        "hoeffding_bound": missing_edge_bound(&p),
        "t": dec.cover.len(),
        "r_min": report.r_min,
        "r_max": report.r_max,
        "max_degree": d_max,
        "max_shell_degree": dec.max_shell_degree,
        "shell_degree_bound": shell_degree_bound(a.n),
        "t_bound": t_bound.to_string(),
        "raw_matchings": dec.raw_matchings,
        "n_even": p.is_even(),
        "n_at_least_2c": p.covers_all_edges(),
        "cover_valid": report.valid,
        "exponents": { "missing": ge, "matchings": fe },
    });
    let passed = report.valid && (dec.cover.len() as u128) <= t_bound;
    let mut params = global_params(g);
    params["c"] = json!(a.c);
    params["n"] = json!(a.n);
    Ok(Report::new("construct geometric", params, result)
        .checked(passed)
        .to(a.outputs.report.clone()))
}

pub(super) fn shells(g: &GlobalArgs, a: &ShellsArgs) -> Result<Report, CliError> {
    let p = GeomParams::new(a.c, a.n)?;
    let total = p
        .vertex_count()
        .filter(|&v| v <= g.max_vertices as u128)
        .ok_or(rsgraph::Error::ResourceLimit {
            what: "vertex count",
            requested: p.vertex_count().unwrap_or(u128::MAX),
            cap: g.max_vertices as u128,
        })? as usize;
    if a.samples == 0 || a.samples > total {
        return Err(CliError::Usage(format!(
            "--samples must lie in 1..={total}"
        )));
    }
    let mut centres = sample(&mut seeded_rng(g.seed), total, a.samples).into_vec();
    centres.sort_unstable();
    let scan = antipodal_scan(&p, &centres, &limits(g))?;
    let shown: Vec<Value> = scan
        .violations
        .iter()
        .take(10)
        .map(|&(z, x, y)| json!([z, x, y]))
        .collect();
    let result = json!({
        "N": total,
        "centres": centres,
        "shells": scan.shells,
        "pairs_checked": scan.pairs_checked,
        "max_gap": scan.max_gap,
        "gap_limit": 4 * a.n,
        "violations": scan.violations.len(),
        "violation_examples": shown,
        "max_shell_degree": scan.max_shell_degree,
        "shell_degree_bound": shell_degree_bound(a.n),
    });
    let mut params = global_params(g);
    params["c"] = json!(a.c);
    params["n"] = json!(a.n);
    params["samples"] = json!(a.samples);
    Ok(Report::new("construct shells", params, result)
        .checked(scan.violations.is_empty())
        .to(a.report.clone()))
}

pub(super) fn code(g: &GlobalArgs, a: &CodeConstructArgs) -> Result<Report, CliError> {
    let (p, code_params) = load_code(g, &a.code)?;
    let cons = enumerate_cover(&p, &limits(g))?;
    let report = verify_cover(&cons.graph, &cons.cover);
    let certificates = cons
        .cover
        .matchings()
        .iter()
        .all(|m| agreement_certificate(&p, m));
    let uniform = cons
        .cover
        .matchings()
        .iter()
        .all(|m| m.len() == p.matching_size());
    write_to(a.outputs.out.as_deref(), |w| {
        write_edge_list(&cons.graph, w)
    })?;
    write_to(a.outputs.cover.as_deref(), |w| write_cover(&cons.cover, w))?;
    let bound = missing_edge_count_bound(p.c(), p.n(), p.d());
    let (e, f) = code_exponents(p.c() as f64, p.d() as f64 / p.n() as f64);
    let result = json!({
        "N": cons.graph.n_vertices(),
        "edges": cons.graph.edge_count(),
        "missing": cons.graph.missing_edge_count(),
        "missing_bound_exact": ratio(&bound.exact),
        "missing_bound_simplified": bound.simplified.map(|b| b.to_string()),
        "hypothesis_d_over_n": bound.hypothesis_holds,
        "t": cons.cover.len(),
        "matching_size": p.matching_size(),
        "cover_valid": report.valid,
        "uniform": uniform,
        "certificates_hold": certificates,
        "e_formula": e,
        "f_formula": f,
    });
    let mut params = global_params(g);
    params["code"] = code_params;
    Ok(Report::new("construct code", params, result)
        .checked(report.valid && certificates && uniform)
        .to(a.outputs.report.clone()))
}
