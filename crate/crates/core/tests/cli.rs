use std::process::Command;

use serde_json::Value;
use symplectic_embed::cli;
use symplectic_embed::rational::parse_rational;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("symplectic-embed").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

const LABEL_KEYS: &[&str] = &["command", "op", "verdict", "route", "kind", "certificate_kind"];

fn check_strings_parse(v: &Value, key: &str) {
    match v {
        Value::String(s) if !LABEL_KEYS.contains(&key) => {
            assert!(parse_rational(s).is_ok(), "{key} = {s:?} does not parse");
        }
        Value::Array(items) => items.iter().for_each(|x| check_strings_parse(x, key)),
        Value::Object(map) => map.iter().for_each(|(k, x)| check_strings_parse(x, k)),
        _ => {}
    }
}

const COMMANDS: &[&[&str]] = &[
    &["caps", "1", "4", "--count", "20"],
    &["weights", "12", "5"],
    &["decide", "--domain", "1,4", "--target", "2", "--certificate", "--capacity-check", "200"],
    &["decide", "--domain", "1,4", "--target", "199/100", "--certificate"],
    &["decide", "--domain", "1,1;1,2", "--target", "2,3", "--certificate"],
    &["pack", "1/2,1/2,1/2,1/2,1/2", "--into", "1"],
    &["squeeze", "--domain", "1,3", "--target", "2,2", "--eps", "0.01"],
    &["staircase", "--min", "1", "--max", "5", "--step", "1/2", "--eps", "0.01", "--format", "json"],
];

#[test]
fn output_is_deterministic() {
    for args in COMMANDS {
        let first = run(args);
        assert_eq!(first.0, 0, "{args:?}: {}", first.2);
        assert_eq!(first, run(args), "{args:?}");
    }
}

#[test]
fn every_rational_round_trips() {
    for args in COMMANDS {
        check_strings_parse(&json(args), "");
    }
}

#[test]
fn headline_decisions() {
    let yes = json(COMMANDS[2]);
    assert_eq!(yes["result"]["verdict"], "yes");
    assert_eq!(yes["result"]["capacity_check"]["holds_up_to"], 200);
    let no = json(COMMANDS[3]);
    assert_eq!(no["result"]["verdict"], "no");
    assert_eq!(no["result"]["certificate_kind"], "volume_violation");
    assert!(no["certificates"].is_object());
}

#[test]
fn yes_never_reports_capacity_violation() {
    for (dom, tgt) in [("1,4", "2"), ("1,2", "1,2"), ("1,1;1,1", "2"), ("2,3", "3,3"), ("1,5", "5/2")] {
        let v = json(&["decide", "--domain", dom, "--target", tgt, "--capacity-check", "500"]);
        if v["result"]["verdict"] == "yes" {
            assert!(v["result"]["capacity_check"].get("first_violation").is_none(), "{dom} -> {tgt}");
        }
    }
}

#[test]
fn caps_csv() {
    let (code, out, _) = run(&["caps", "1", "1", "--count", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["k,value", "0,0", "1,1", "2,1", "3,2", "4,2", "5,2"]);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("symplectic-embed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.json");
    let (code, out, _) = run(&["--out", path.to_str().unwrap(), "weights", "12", "5"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, json(&["weights", "12", "5"]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_symplectic-embed");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["weights", "12", "5"]), Some(0));
    assert_eq!(status(&["--help"]), Some(0));
    assert_eq!(status(&["weights", "0", "5"]), Some(2));
    assert_eq!(status(&["decide", "--domain", "1,x", "--target", "2"]), Some(2));
    assert_eq!(status(&["frobnicate"]), Some(2));
}
