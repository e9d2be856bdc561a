use num_rational::BigRational;
use rsgraph::code_graph::code_exponents;
use rsgraph::vempala::{
    conjecture_verdict, counterexample_partition, part_h_contribution, write_partition,
};
use serde_json::json;

use super::{global_params, limits, load_code, write_to};
use crate::report::ratio;
use crate::{CliError, GlobalArgs, Report, VempalaArgs};

pub(super) fn run(g: &GlobalArgs, a: &VempalaArgs) -> Result<Report, CliError> {
    let (p, code_params) = load_code(g, &a.code)?;
    let ce = counterexample_partition(&p, &limits(g))?;
    write_to(a.partition.as_deref(), |w| {
        write_partition(&ce.partition, w)
    })?;
    let one = BigRational::from_integer(1.into());
    let identity =
        (0..ce.matching_parts).all(|id| part_h_contribution(&ce.partition, id, &ce.h) == one);
    let verdict = conjecture_verdict(&ce.partition)?;
    let chain_bound = ce.matching_parts + ce.missing_pairs;
    let within = verdict.sum <= BigRational::from_integer(chain_bound.into());
    let (e, f) = code_exponents(p.c() as f64, p.d() as f64 / p.n() as f64);
    let n = ce.partition.left();
    let result = json!({
        "N": n,
        "k": ce.partition.right(),
        "parts": ce.partition.parts().len(),
        "matching_parts": ce.matching_parts,
        "missing_pairs": ce.missing_pairs,
        "per_part_identity_holds": identity,
        "sum": ratio(&verdict.sum),
        "sum_value": verdict.sum_value,
        "chain_bound": chain_bound,
        "sum_within_chain_bound": within,
        "threshold": verdict.threshold,
        "threshold_constant": 1,
        "threshold_log": "natural",
        "refutes": verdict.refutes,
        "exponents": { "e": e, "f": f },
    });
    let mut params = global_params(g);
    params["code"] = code_params;
    Ok(Report::new("vempala", params, result)
        .checked(identity && within)
        .to(a.report.clone()))
}
