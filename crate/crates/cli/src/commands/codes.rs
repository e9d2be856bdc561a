use rsgraph::codes::{gv_rate, gv_search, read_generator, verify_code, write_generator};
use serde_json::json;

use super::{generator_rows, global_params, open, write_to};
use crate::{CliError, GlobalArgs, GvArgs, Report, VerifyArgs};

pub(super) fn gv(g: &GlobalArgs, a: &GvArgs) -> Result<Report, CliError> {
    let code = gv_search(a.n, a.k, a.d, g.seed, a.tries)?;
    let check = verify_code(&code)?;
    write_to(a.out.as_deref(), |w| write_generator(&code, w))?;
    let result = json!({
        "n": code.n(),
        "k": code.k(),
        "proper": check.is_proper,
        "rank": check.rank,
        "true_distance": check.true_distance,
        "generator": generator_rows(&code),
        "gv_rate": gv_rate(a.n, a.d),
    });
    let mut params = global_params(g);
    params["n"] = json!(a.n);
    params["k"] = json!(a.k);
    params["d"] = json!(a.d);
    params["tries"] = json!(a.tries);
    Ok(Report::new("codes gv", params, result)
        .checked(check.meets(a.k, a.d + 1))
        .to(a.report.clone()))
}

pub(super) fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let code = read_generator(open(&a.file)?)?;
    let check = verify_code(&code)?;
    let full_rank = check.rank == code.k();
    let result = json!({
        "n": code.n(),
        "k": code.k(),
        "proper": check.is_proper,
        "rank": check.rank,
        "full_rank": full_rank,
        "true_distance": check.true_distance,
    });
    let params = json!({ "file": a.file.display().to_string() });
    Ok(Report::new("codes verify", params, result)
        .checked(full_rank)
        .to(a.report.clone()))
}
