use rsgraph::channel::{
    build_schedule, meshulam_lower_bound, partition_shifts, partition_two, read_schedule,
    simulate as replay, write_schedule, ChannelPartition, EventKind, Policy, SimReport,
};
use rsgraph::geometric::GeomParams;
use serde_json::{json, Value};

use super::{global_params, limits, load_code, open, write_to};
use crate::{
    ChannelShiftsArgs, ChannelTwoArgs, CliError, GlobalArgs, PolicyArg, Report, ScheduleOutputs,
    SimulateArgs,
};

fn policy(p: PolicyArg) -> Policy {
    match p {
        PolicyArg::Sequential => Policy::Sequential,
        PolicyArg::RoundRobin => Policy::RoundRobin,
    }
}

fn sim_value(rep: &SimReport) -> Value {
    let events: Vec<Value> = rep
        .garbled_events
        .iter()
        .map(|e| {
            json!({
                "round": e.round,
                "channel": e.channel,
                "kind": match e.kind {
                    EventKind::Interference => "interference",
                    EventKind::Overload => "overload",
                },
                "station": e.station,
                "peers": e.peers,
            })
        })
        .collect();
    json!({
        "rounds_used": rep.rounds_used,
        "per_subchannel_rounds": rep.per_subchannel_rounds,
        "parallel_rounds": rep.parallel_rounds,
        "delivered": rep.delivered,
        "garbled_events": events,
        "double_deliveries": rep.double_deliveries.iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
    })
}

/// Schedules the partition, replays it and assembles the common report part.
fn run_partition(cp: &ChannelPartition, out: &ScheduleOutputs) -> Result<(Value, bool), CliError> {
    let schedule = build_schedule(cp, policy(out.policy));
    write_to(out.schedule.as_deref(), |w| write_schedule(&schedule, w))?;
    let rep = replay(&schedule, cp.n())?;
    let n = cp.n();
    let subchannels: Vec<Value> = cp
        .subchannels()
        .iter()
        .map(|s| json!({ "pairs": s.graph.edge_count(), "t": s.cover.len() }))
        .collect();
    let clean =
        rep.delivered == n * n && rep.garbled_events.is_empty() && rep.double_deliveries.is_empty();
    let channels = cp.subchannels().len() as u32;
    let value = json!({
        "N": n,
        "subchannels": subchannels,
        "naive_rounds": n * n,
        "simulation": sim_value(&rep),
        "meshulam_bound": meshulam_lower_bound(n, channels).ok(),
        "meshulam_bound_heuristic": true,
    });
    Ok((value, clean))
}

pub(super) fn two(g: &GlobalArgs, a: &ChannelTwoArgs) -> Result<Report, CliError> {
    let (p, code_params) = load_code(g, &a.code)?;
    let cp = partition_two(&p, &limits(g))?;
    let (result, clean) = run_partition(&cp, &a.outputs)?;
    let mut params = global_params(g);
    params["code"] = code_params;
    params["policy"] = json!(format!("{:?}", a.outputs.policy));
    Ok(Report::new("channel two", params, result)
        .checked(clean)
        .to(a.outputs.report.clone()))
}

pub(super) fn shifts(g: &GlobalArgs, a: &ChannelShiftsArgs) -> Result<Report, CliError> {
    let p = GeomParams::new(a.c, a.n)?;
    let sp = partition_shifts(&p, a.channels, g.seed, a.attempts, &limits(g))?;
    let (mut result, clean) = run_partition(&sp.partition, &a.outputs)?;
    result["overflow"] = json!(sp.overflow);
    result["attempts_used"] = json!(sp.attempts_used);
    let mut params = global_params(g);
    params["c"] = json!(a.c);
    params["n"] = json!(a.n);
    params["channels"] = json!(a.channels);
    params["attempts"] = json!(a.attempts);
    params["policy"] = json!(format!("{:?}", a.outputs.policy));
    Ok(Report::new("channel shifts", params, result)
        .checked(clean)
        .to(a.outputs.report.clone()))
}

pub(super) fn simulate(a: &SimulateArgs) -> Result<Report, CliError> {
    let schedule = read_schedule(open(&a.schedule)?)?;
    let largest = schedule
        .rounds
        .iter()
        .flat_map(|r| r.matching.edges().iter().map(|&(u, v)| u.max(v) + 1))
        .max()
        .unwrap_or(0);
    let n = a.stations.unwrap_or(largest);
    let rep = replay(&schedule, n)?;
    let mut result = sim_value(&rep);
    result["N"] = json!(n);
    let params = json!({
        "schedule": a.schedule.display().to_string(),
        "stations": n,
    });
    Ok(Report::new("channel simulate", params, result).to(a.report.clone()))
}
