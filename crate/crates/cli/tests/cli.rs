use std::path::PathBuf;
use std::process::{Command, Output};

use bid::engine::Operator;
use bid::eval::Env;
use bid::parser::parse_program;
use bid::tm::{Flavor, Machine};
use bid::BitStr;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn machine(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/machines").join(name).display().to_string()
}

fn bid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bid")).args(args).env_remove("BID_BUDGET").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = bid(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    bid(args).status.code().unwrap()
}

#[test]
fn classify_reports_every_definition() {
    let axioms = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/axioms/stdlib.bid");
    let out = stdout(&["classify", axioms.to_str().unwrap()]);
    assert!(out.lines().count() >= 15);
    for line in out.lines() {
        assert!(line.ends_with(": SigmaB(0)"), "{line}");
    }
    assert_eq!(stdout(&["classify", &data("sigma1.bid")]), "has_root: SigmaB(1)\nall_small: PiB(1)");
    assert_eq!(
        stdout(&["classify", &data("sigma1.bid"), "--format", "json"]),
        r#"[{"name":"has_root","class":"SigmaB(1)"},{"name":"all_small","class":"PiB(1)"}]"#
    );
}

#[test]
fn syntax_errors_exit_2_with_a_position() {
    for (file, pos) in [("bad.bid", " at 2:"), ("sort.bid", " at 1:")] {
        let out = bid(&["classify", &data(file)]);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(&format!("{file}:")) && err.contains(pos), "{err}");
    }
    assert_eq!(code(&["iterate", &data("ops.bid"), "nosuch", "--width", "3", "-n", "1"]), 2);
    assert_eq!(code(&["iterate", &data("ops.bid"), "mark", "--width", "3", "-n", "1", "--set", "k"]), 2);
}

#[test]
fn iterate() {
    let ops = data("ops.bid");
    assert_eq!(stdout(&["iterate", &ops, "not", "--width", "3", "-n", "5"]), "0b111");
    assert_eq!(stdout(&["iterate", &ops, "not", "--width", "3", "-n", "0", "--start", "0b101"]), "0b101");
    // Far beyond the budget: reduced modulo the period.
    let even = format!("1{}", "0".repeat(40));
    let odd = format!("1{}1", "0".repeat(39));
    assert_eq!(stdout(&["iterate", &ops, "not", "--width", "3", "-n", &even]), "0b0");
    assert_eq!(stdout(&["iterate", &ops, "not", "--width", "3", "-n", &odd]), "0b111");
    assert_eq!(stdout(&["iterate", &ops, "mark", "--width", "8", "-n", "1", "--set", "k=6"]), "0b1000000");
    assert_eq!(
        stdout(&["iterate", &ops, "counter", "--width", "5", "-n", "7", "--format", "json"]),
        r#"{"state":"0b111","steps":"7","width":5}"#
    );
}

#[test]
fn budget_overrun_exits_3_and_keeps_the_partial_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let args = ["iterate", &data("ops.bid"), "counter", "--width", "40", "-n", "1000", "--budget", "25"];
    let mut with_trace = args.to_vec();
    with_trace.extend(["--trace-out", trace.to_str().unwrap()]);
    assert_eq!(code(&with_trace), 3);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 1 + 26);
    // The partial trace still verifies.
    let out = stdout(&["verify-trace", &data("ops.bid"), "counter", "--width", "40", trace.to_str().unwrap()]);
    assert_eq!(out, "ok states=26");
    // Without a trace the counter's period 2^40 is out of reach as well.
    assert_eq!(code(&args), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_bid")).args(args).env("BID_BUDGET", "5").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(code(&["iterate", &data("ops.bid"), "not", "--width", "3", "-n", "1", "--budget", "0"]), 2);
}

#[test]
fn fixpoint_and_period() {
    let ops = data("ops.bid");
    assert_eq!(stdout(&["fixpoint", &ops, "shift", "--width", "4"]), "k=4 fixpoint=0b1111");
    assert_eq!(stdout(&["period", &ops, "not", "--width", "3"]), "u=0 v=2 U=0b0 V=0b10");
    assert_eq!(stdout(&["period", &ops, "ident", "--width", "3"]), "u=0 v=1 U=0b0 V=0b1");
    assert_eq!(stdout(&["period", &ops, "counter", "--width", "4"]), "u=0 v=16 U=0b0 V=0b10000");
    assert_eq!(code(&["fixpoint", &ops, "drop", "--width", "4"]), 0);
    assert_eq!(code(&["fixpoint", &ops, "not", "--width", "4"]), 1);
}

#[test]
fn inflationary_modes() {
    let ops = data("ops.bid");
    assert_eq!(stdout(&["inflationary", &ops, "shift", "--width", "6"]), "yes");
    assert_eq!(stdout(&["inflationary", &ops, "shift", "--width", "6", "--mode", "syntactic"]), "yes");
    assert_eq!(stdout(&["inflationary", &ops, "not", "--width", "3"]), "no state=0b1 index=0");
    assert_eq!(stdout(&["inflationary", &ops, "counter", "--width", "30"]), "unknown");
    let sampled = ["inflationary", &ops, "drop", "--width", "30", "--mode", "sampled", "--seed", "3", "--format", "json"];
    let first = stdout(&sampled);
    assert!(first.starts_with(r#"{"inflationary":"no""#), "{first}");
    assert_eq!(stdout(&sampled), first);
}

#[test]
fn traces_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    let ops = data("ops.bid");
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["iterate", &ops, "counter", "--width", "6", "-n", "9", "--trace-out", p]), "0b1001");
    assert_eq!(stdout(&["verify-trace", &ops, "counter", "--width", "6", p]), "ok states=10");
    let text = std::fs::read_to_string(&path).unwrap();
    let tampered: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(k, l)| if k == 4 { l.replace("\"3\"", "\"7\"") } else { l.to_string() })
        .collect();
    std::fs::write(&path, tampered.join("\n") + "\n").unwrap();
    let out = bid(&["verify-trace", &ops, "counter", "--width", "6", p]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "fault index=3");
    assert_eq!(code(&["verify-trace", &ops, "counter", "--width", "7", p]), 1);
    std::fs::write(&path, "{\"schema\":\"other\",\"version\":1,\"width\":6}\n").unwrap();
    assert_eq!(code(&["verify-trace", &ops, "counter", "--width", "6", p]), 2);
}

#[test]
fn run_tm() {
    assert_eq!(stdout(&["run-tm", &machine("inc.json"), "0b1011"]), format!("output=0b1100 iterations=4 width={}", 20 * 7));
    assert_eq!(stdout(&["run-tm", &machine("inc.json"), "0b1011", "--direct"]), "output=0b1100 steps=3");
    let out = stdout(&["run-tm", &machine("counter.json"), "0b111111", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"], "0b1000000");
    assert_eq!(v["flavor"], "pspace");
    assert!(v["iterations"].as_u64().unwrap() > 64);
    assert_eq!(code(&["run-tm", &data("tight.json"), "0b11"]), 4);
    assert_eq!(code(&["run-tm", &data("tight.json"), "0b11", "--direct"]), 4);
    assert_eq!(code(&["run-tm", &data("tight.json"), "0b11", "--flavor", "pspace"]), 4);
    assert_eq!(code(&["run-tm", &machine("counter.json"), "0b111111", "--direct", "--budget", "50"]), 3);
    assert_eq!(code(&["run-tm", &machine("inc.json"), "1011"]), 2);
}

#[test]
fn json_is_byte_stable_and_matches_the_library() {
    let ops = data("ops.bid");
    let args = ["period", &ops, "counter", "--width", "7", "--start", "0b101", "--format", "json"];
    let first = stdout(&args);
    assert_eq!(stdout(&args), first);
    let program = parse_program(&std::fs::read_to_string(&ops).unwrap()).unwrap();
    let op = Operator::new(program.get("counter").unwrap().clone(), 7, &Env::new()).unwrap();
    let report = op.find_period(&BitStr::from_u64(0b101)).unwrap();
    let (u, v) = report.witnesses();
    assert_eq!(
        first,
        format!(r#"{{"u":{},"v":{},"U":"{u}","V":"{v}","state_at_u":"{}"}}"#, report.u, report.v, report.state_at_u)
    );
    let m = Machine::load(machine("palindrome.json")).unwrap();
    let run = m.run_via_id(&BitStr::from_u64(0b1001), Flavor::Ptime, Default::default()).unwrap();
    let out = stdout(&["run-tm", &machine("palindrome.json"), "0b1001", "--format", "json"]);
    assert_eq!(
        out,
        format!(r#"{{"output":"{}","iterations":{},"width":{},"flavor":"ptime"}}"#, run.output, run.iterations, run.width)
    );
}
