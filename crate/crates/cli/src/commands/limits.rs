use rsgraph::io::{read_cover, read_edge_list, write_edge_list};
use rsgraph::limits::{
    check_min_degree_bound, enumerate_triangles, general_missing_lower_bound, min_degree_margins,
    triangle_graph, triangles_per_edge,
};
use serde_json::json;

use super::{load_graph_and_cover, open, write_to};
use crate::{CliError, MindegArgs, Report, TriangleArgs};

pub(super) fn triangle(a: &TriangleArgs) -> Result<Report, CliError> {
    let (g, cover) = load_graph_and_cover(&a.edges, &a.cover)?;
    let tri = triangle_graph(&g, &cover)?;
    let found = enumerate_triangles(&tri.graph).len();
    let one_each = triangles_per_edge(&tri.graph).iter().all(|&k| k == 1);
    write_to(a.out.as_deref(), |w| write_edge_list(&tri.graph, w))?;
    let result = json!({
        "N": g.n_vertices(),
        "edges": g.edge_count(),
        "crossing_edges": tri.crossing.len(),
        "apexes": tri.apex_count,
        "h_vertices": tri.graph.n_vertices(),
        "h_edges": tri.graph.edge_count(),
        "triangles": tri.triangles.len(),
        "enumerated_triangles": found,
        "every_edge_in_one_triangle": one_each,
    });
    let params = json!({
        "edges": a.edges.display().to_string(),
        "cover": a.cover.display().to_string(),
    });
    let passed = one_each && found == tri.crossing.len();
    Ok(Report::new("limits triangle", params, result)
        .checked(passed)
        .to(a.report.clone()))
}

pub(super) fn mindeg(a: &MindegArgs) -> Result<Report, CliError> {
    let g = read_edge_list(open(&a.edges)?)?;
    let (rep, verified) = match (&a.cover, a.r) {
        (Some(path), _) => (check_min_degree_bound(&g, &read_cover(open(path)?)?)?, true),
        (None, Some(r)) if r >= 1 => (min_degree_margins(&g, r), false),
        _ => return Err(CliError::Usage("--r must be at least 1".into())),
    };
    let lower = general_missing_lower_bound(g.n_vertices(), rep.r).ok();
    let result = json!({
        "N": g.n_vertices(),
        "r": rep.r,
        "cover_verified": verified,
        "min_complement_degree": rep.complement_degrees.iter().min(),
        "max_complement_degree": rep.complement_degrees.iter().max(),
        "min_margin": rep.min_margin().map(|m| m.to_string()),
        "violations": rep.violations.len(),
        "holds": rep.holds(),
        "missing": g.missing_edge_count(),
        "general_lower_bound": lower,
        "general_lower_bound_heuristic": true,
    });
    let params = json!({
        "edges": a.edges.display().to_string(),
        "cover": a.cover.as_ref().map(|p| p.display().to_string()),
        "r": a.r,
    });
    Ok(Report::new("limits mindeg", params, result).to(a.report.clone()))
}
