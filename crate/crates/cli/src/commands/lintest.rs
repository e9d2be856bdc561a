use std::path::Path;

use num_rational::Rational64;
use rand::Rng;
use rsgraph::graph::verify_cover;
use rsgraph::limits::uniformize;
use rsgraph::lintest::{
    estimate_soundness, hw_bound, min_bound, walsh_correlation, BooleanFunction,
};
use rsgraph::seeded_rng;
use serde_json::{json, Value};

use super::{global_params, load_graph_and_cover, open};
use crate::report::ratio;
use crate::{CliError, GlobalArgs, LintestArgs, Report};

/// Slack on the floating-point bound comparison.
const BOUND_SLACK: f64 = 1e-12;

fn function(spec: &str, m: usize, seed: u64) -> Result<(BooleanFunction, Value), CliError> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match (kind, arg) {
        ("linear", "") => {
            let mask = seeded_rng(seed).gen::<u64>() & ((1u64 << m) - 1);
            Ok((
                BooleanFunction::linear(m, mask)?,
                json!({ "kind": "linear", "mask": mask }),
            ))
        }
        ("and", "") => Ok((BooleanFunction::and_padded(m)?, json!({ "kind": "and" }))),
        ("random", s) => {
            let s: u64 = s
                .parse()
                .map_err(|_| CliError::Usage(format!("bad seed in `{spec}`")))?;
            Ok((
                BooleanFunction::random(m, s)?,
                json!({ "kind": "random", "seed": s }),
            ))
        }
        ("table", path) if !path.is_empty() => {
            let f = BooleanFunction::read_table(open(Path::new(path))?)?;
            if f.arity() != m {
                return Err(CliError::Usage(format!(
                    "table has arity {}, --m is {m}",
                    f.arity()
                )));
            }
            Ok((f, json!({ "kind": "table", "path": path })))
        }
        _ => Err(CliError::Usage(format!("unknown function `{spec}`"))),
    }
}

pub(super) fn run(g: &GlobalArgs, a: &LintestArgs) -> Result<Report, CliError> {
    if a.m == 0 || a.m > 30 {
        return Err(CliError::Usage("--m must lie in 1..=30".into()));
    }
    let (graph, cover) = load_graph_and_cover(&a.edges, &a.cover)?;
    let check = verify_cover(&graph, &cover);
    if !check.valid {
        return Err(CliError::Failed(
            "the cover is not a valid induced-matching cover".into(),
        ));
    }
    let (f, fdesc) = function(&a.f, a.m, g.seed)?;
    let d_f: Rational64 = walsh_correlation(&f)?;
    let d_value = *d_f.numer() as f64 / *d_f.denom() as f64;
    let r = check.r_min.max(1);
    let t = uniformize(&cover, r)?.cover.len();
    let est = estimate_soundness(&graph, &f, a.trials, g.seed)?;
    let bound = hw_bound(r, t, d_value)?;
    let mins = min_bound(graph.n_vertices(), d_value, &[(r, t)])?;
    let within = est.p_hat <= bound + 4.0 * est.stderr + BOUND_SLACK;
    let result = json!({
        "N": graph.n_vertices(),
        "edges": graph.edge_count(),
        "r": r,
        "t": t,
        "function": fdesc,
        "d_f": ratio(&d_f),
        "d_f_value": d_value,
        "trials": est.trials,
        "accepted": est.accepted,
        "p_hat": est.p_hat,
        "stderr": est.stderr,
        "hw_bound": bound,
        "min_bound": {
            "pairwise": mins.pairwise,
            "graph_terms": mins.graph_terms,
            "min": mins.min,
            "instance_specific": true,
        },
        "within_bound": within,
    });
    let mut params = global_params(g);
    params["edges"] = json!(a.edges.display().to_string());
    params["cover"] = json!(a.cover.display().to_string());
    params["m"] = json!(a.m);
    params["f"] = json!(a.f);
    params["trials"] = json!(a.trials);
    Ok(Report::new("lintest", params, result)
        .checked(within)
        .to(a.report.clone()))
}
