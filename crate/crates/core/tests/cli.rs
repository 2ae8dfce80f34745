use std::path::Path;
use std::process::{Command, Output};

fn edvqe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edvqe"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = edvqe(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_solve_gw_warmstart_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    ok(&["gen", "complete", "10", "7", s(&graph)]);

    let solve = dir.path().join("solve.json");
    let trace = dir.path().join("trace.csv");
    let params = dir.path().join("params.json");
    ok(&[
        "solve",
        s(&graph),
        "--seed",
        "3",
        "--out",
        s(&solve),
        "--trace-csv",
        s(&trace),
        "--params-out",
        s(&params),
    ]);
    let report = json(&solve);
    assert_eq!(report["seed"], 3);
    assert!(report["best"]["cut"].as_f64().unwrap() >= report["initial"]["cut"].as_f64().unwrap());
    assert!(std::fs::read_to_string(&trace)
        .unwrap()
        .starts_with("iter,energy\n"));
    assert!(json(&params).get("0").is_some());

    let gw = dir.path().join("gw.json");
    ok(&[
        "gw",
        s(&graph),
        "--projections",
        "50",
        "--runs",
        "2",
        "--out",
        s(&gw),
    ]);
    assert_eq!(json(&gw)["runs"].as_array().unwrap().len(), 2);

    let warm = dir.path().join("warm.json");
    ok(&[
        "warmstart",
        s(&graph),
        "--projections",
        "20",
        "--out",
        s(&warm),
    ]);
    let warm = json(&warm);
    assert!(
        warm["result"]["best"]["cut"].as_f64().unwrap() >= warm["gw_cut"]["cut"].as_f64().unwrap()
    );
}

#[test]
fn synth_then_phase() {
    let dir = tempfile::tempdir().unwrap();
    let frags = dir.path().join("reads.txt");
    let truth = dir.path().join("truth.txt");
    ok(&[
        "synth",
        "--sites",
        "12",
        "--reads",
        "16",
        "--read-len",
        "4",
        "--seed",
        "2",
        s(&frags),
        "--truth-out",
        s(&truth),
        "--sparse",
    ]);
    let report = dir.path().join("phase.json");
    let haps = dir.path().join("haps.txt");
    ok(&[
        "phase",
        s(&frags),
        "--truth",
        s(&truth),
        "--solver",
        "brute",
        "--out",
        s(&report),
        "--haplotypes",
        s(&haps),
    ]);
    let r = json(&report);
    assert_eq!(r["completeness"], 1.0);
    let lines: Vec<String> = std::fs::read_to_string(&haps)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].len(), 12);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"graph_family": "regular3", "sizes": [12], "run_seeds": [0, 1], "r_list": [1, 10]}"#,
    )
    .unwrap();
    let out = dir.path().join("bench.csv");
    let res = edvqe(&["bench", s(&spec), s(&out)]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("family,n,metric,R,A_bar,"));
    assert!(text.contains("QP2"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(edvqe(&[]).status.code(), Some(2));
    assert_eq!(
        edvqe(&["gen", "hexagon", "10", "1", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        edvqe(&["solve", "/nonexistent/g.txt"]).status.code(),
        Some(1)
    );

    let bad = dir.path().join("cfg.json");
    std::fs::write(&bad, r#"{"subsystem_size": 1}"#).unwrap();
    let graph = dir.path().join("g.txt");
    ok(&["gen", "regular3", "8", "1", s(&graph)]);
    assert_eq!(
        edvqe(&["solve", s(&graph), "--config", s(&bad)])
            .status
            .code(),
        Some(2)
    );
}
