use std::path::PathBuf;
use std::process::{Command, Output};

use matroid_auction::auction::{parse_trace, validate_trace};
use matroid_auction::io::parse_instance;

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    path.to_str().unwrap().to_string()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matroid-auction"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_four_buyer_graph() {
    for extra in [&[][..], &["--long-step"][..]] {
        let graph = fixture("four-buyer-graph.json");
        let mut args = vec!["verify", "--instance", &graph];
        args.extend_from_slice(extra);
        let out = cli(&args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stdout(&out).contains("payments match VCG: (0,2,4,2)"), "{}", stdout(&out));
    }
}

#[test]
fn run_writes_a_replayable_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.log");
    let path = fixture("parallel-path.json");
    let out = cli(&["run", "--instance", &path, "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["welfare"], 7);
    assert_eq!(report["buyer_payments"]["1"], 3);

    let instance = parse_instance(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let events = parse_trace(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(validate_trace(&events, &instance).is_clean());

    let out = cli(&["validate", "--instance", &path, "--trace", trace.to_str().unwrap(), "--audit"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn tampered_trace_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.log");
    let path = fixture("parallel-path.json");
    cli(&["run", "--instance", &path, "--trace", trace.to_str().unwrap()]);
    let text = std::fs::read_to_string(&trace).unwrap().replace("SELL buyer=1 item=f1 price=3", "SELL buyer=1 item=f1 price=9");
    std::fs::write(&trace, text).unwrap();
    let out = cli(&["validate", "--instance", &path, "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("sale price 9"), "{}", stderr(&out));
}

#[test]
fn seeded_order_keeps_the_outcome() {
    let path = fixture("four-buyer-graph.json");
    let out = cli(&["run", "--instance", &path, "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["welfare"], 14);
}

#[test]
fn scripted_buyer_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.log");
    let path = fixture("doubled-triangle.json");
    let script = format!("1=script:{}", fixture("prefer-critical.script.json"));
    let out = cli(&["run", "--instance", &path, "--strategy", &script, "--strategy", "2=truthful", "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let t = trace.to_str().unwrap();
    let out = cli(&["consistency", "--instance", &path, "--trace", t, "--buyer", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("`m` critical at 2 contradicts `m` chosen over `l`"), "{}", stderr(&out));
    let out = cli(&["consistency", "--instance", &path, "--trace", t, "--buyer", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn vcg_with_and_without_bids() {
    let path = fixture("four-buyer-graph.json");
    let plain = cli(&["vcg", "--instance", &path]);
    let bids = fixture("four-buyer-bids.json");
    let with = cli(&["vcg", "--instance", &path, "--bids", &bids]);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(stdout(&plain), stdout(&with));
    let report: serde_json::Value = serde_json::from_str(&stdout(&plain)).unwrap();
    assert_eq!(report["bid_weight"], 14);
}

#[test]
fn overlapping_interests() {
    let out = cli(&["run", "--instance", &fixture("shared-item.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["base"], serde_json::json!(["a#1", "c"]));
    assert_eq!(report["welfare"], 6);
}

#[test]
fn props_exit_codes() {
    let out = cli(&["props", "--family", "graphic,partition", "--trials", "30", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("30/30"));
    let out = cli(&["props", "--family", "graphic", "--trials", "30", "--seed", "7", "--mutation", "hide-base"]);
    assert_eq!(out.status.code(), Some(1));
    let out = cli(&["props", "--family", "graphic", "--trials", "3", "--seed", "7", "--max-items", "20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scenarios_table() {
    let out = cli(&["scenarios", "appendix-b"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Vec<String>> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect();
    let buyer1: Vec<&str> = rows.iter().map(|r| r[r.len() - 4].as_str()).collect();
    assert_eq!(buyer1, ["1", "1", "2", "0"]);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(cli(&["auction"]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--instance", &fixture("parallel-path.json"), "--frobnicate"]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--instance", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--instance", &fixture("parallel-path.json"), "--strategy", "9=truthful"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"matroid": {"kind": "uniform", "n": 2, "k": 1, "items": ["a", "b"]}, "buyers": [{"id": 1, "items": {"a": 1, "q": 1}}]}"#,
    )
    .unwrap();
    let out = cli(&["run", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`q`"), "{}", stderr(&out));
}
