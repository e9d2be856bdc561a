use std::path::Path;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = rsgraph_cli::run_with_output(
        std::iter::once("rsgraph").chain(args.iter().copied()),
        &mut out,
    );
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn pinned_gen(dir: &Path) -> String {
    let path = p(dir, "gen.txt");
    std::fs::write(&path, "4 2\n11\n11\n10\n10\n").unwrap();
    path
}

#[test]
fn geometric_report_envelope() {
    let (code, v) = json(&["construct", "geometric", "--c", "3", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["tool"], "rsgraph");
    assert_eq!(v["command"], "construct geometric");
    assert_eq!(v["checks_passed"], true);
    assert_eq!(v["result"]["edges"], 26);
    assert_eq!(v["result"]["missing"], 10);
    assert_eq!(v["result"]["mu"], "8/3");
}

#[test]
fn code_construction_writes_readable_files() {
    let dir = tempfile::tempdir().unwrap();
    let gen = pinned_gen(dir.path());
    let (edges, cover) = (p(dir.path(), "e.txt"), p(dir.path(), "c.txt"));
    let (code, v) = json(&[
        "construct",
        "code",
        "--c",
        "3",
        "--n",
        "4",
        "--d",
        "2",
        "--gen",
        &gen,
        "--out",
        &edges,
        "--cover",
        &cover,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["t"], 972);
    let g = rsgraph::io::read_edge_list(std::io::BufReader::new(
        std::fs::File::open(&edges).unwrap(),
    ))
    .unwrap();
    let c = rsgraph::io::read_cover(std::io::BufReader::new(
        std::fs::File::open(&cover).unwrap(),
    ))
    .unwrap();
    assert_eq!(g.edge_count(), 1944);
    assert!(rsgraph::graph::verify_cover(&g, &c).valid);

    let (code, v) = json(&["limits", "mindeg", "--edges", &edges, "--cover", &cover]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["min_complement_degree"], 32);
    assert_eq!(v["result"]["violations"], 0);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(dir.path(), "r.json");
    let (code, out) = run(&[
        "--seed", "3", "codes", "gv", "--n", "8", "--k", "2", "--d", "2", "--report", &report,
    ]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), out);
}

#[test]
fn text_format_flattens_keys() {
    let (code, out) = run(&[
        "--format",
        "text",
        "construct",
        "geometric",
        "--c",
        "3",
        "--n",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "result.edges = 26"), "{out}");
}

#[test]
fn seeds_are_reproducible() {
    let a = run(&[
        "--seed", "11", "codes", "gv", "--n", "10", "--k", "3", "--d", "2",
    ]);
    let b = run(&[
        "--seed", "11", "codes", "gv", "--n", "10", "--k", "3", "--d", "2",
    ]);
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["construct", "geometric", "--c", "0", "--n", "2"]).0,
        1
    );
    assert_eq!(
        run(&["codes", "gv", "--n", "8", "--k", "7", "--d", "2"]).0,
        1
    );
    assert_eq!(run(&["no-such-command"]).0, 1);
    assert_eq!(run(&["codes", "verify", "/nonexistent/gen.txt"]).0, 1);
    assert_eq!(
        run(&[
            "--max-vertices",
            "10",
            "construct",
            "geometric",
            "--c",
            "3",
            "--n",
            "4"
        ])
        .0,
        3
    );
}

#[test]
fn broken_cover_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let edges = p(dir.path(), "e.txt");
    let cover = p(dir.path(), "c.txt");
    std::fs::write(&edges, "3 2\n0 1\n1 2\n").unwrap();
    std::fs::write(&cover, "0: 0-1 1-2\n").unwrap();
    assert_eq!(
        run(&["limits", "triangle", "--edges", &edges, "--cover", &cover]).0,
        2
    );
}

#[test]
fn planted_collision_is_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let sched = p(dir.path(), "s.txt");
    std::fs::write(
        &sched,
        "round 0 chan 0: 0>2 1>3\nround 1 chan 0: 0>3\nround 2 chan 0: 1>2\n",
    )
    .unwrap();
    let (code, v) = json(&["channel", "simulate", "--schedule", &sched]);
    assert_eq!(code, 0);
    let events = v["result"]["garbled_events"].as_array().unwrap();
    assert_eq!(events.len(), 2, "{v}");
    assert!(events
        .iter()
        .all(|e| e["round"] == 0 && e["kind"] == "interference"));
    assert_eq!(v["result"]["delivered"], 2);
}

#[test]
fn two_channel_schedule_roundtrips_through_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let gen = pinned_gen(dir.path());
    let sched = p(dir.path(), "s.txt");
    let (code, v) = json(&[
        "channel",
        "two",
        "--c",
        "3",
        "--n",
        "4",
        "--d",
        "2",
        "--gen",
        &gen,
        "--schedule",
        &sched,
        "--policy",
        "round-robin",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["simulation"]["delivered"], 6561);
    let (code, replay) = json(&["channel", "simulate", "--schedule", &sched]);
    assert_eq!(code, 0);
    assert_eq!(replay["result"]["delivered"], 6561);
    assert_eq!(
        replay["result"]["per_subchannel_rounds"],
        v["result"]["simulation"]["per_subchannel_rounds"]
    );
}

#[test]
fn vempala_partition_file_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let gen = pinned_gen(dir.path());
    let part = p(dir.path(), "p.txt");
    let (code, v) = json(&[
        "vempala",
        "--c",
        "3",
        "--n",
        "4",
        "--d",
        "2",
        "--gen",
        &gen,
        "--partition",
        &part,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["sum"], "3645/1");
    let ep = rsgraph::vempala::read_partition(
        std::io::BufReader::new(std::fs::File::open(&part).unwrap()),
        81,
        81,
    )
    .unwrap();
    assert_eq!(ep.parts().len(), 3645);
}

#[test]
fn lintest_accepts_linear_functions() {
    let dir = tempfile::tempdir().unwrap();
    let gen = pinned_gen(dir.path());
    let (edges, cover) = (p(dir.path(), "e.txt"), p(dir.path(), "c.txt"));
    assert_eq!(
        run(&[
            "construct",
            "code",
            "--c",
            "3",
            "--n",
            "4",
            "--d",
            "2",
            "--gen",
            &gen,
            "--out",
            &edges,
            "--cover",
            &cover
        ])
        .0,
        0
    );
    let (code, v) = json(&[
        "lintest", "--edges", &edges, "--cover", &cover, "--m", "6", "--f", "linear", "--trials",
        "500",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["accepted"], 500);
    assert_eq!(v["result"]["d_f"], "1/1");
}
