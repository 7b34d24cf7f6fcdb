use std::io::Write;
use std::process::{Command, Stdio};

use nsim_cli::{run, EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use nsim_core::preset::{build_preset, PresetName};
use nsim_core::{parse_position, solve, SolveOptions};
use serde_json::Value;

fn nsim(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nsim").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("not json ({e}): {s}"))
}

fn without_stats(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("stats");
    v
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("nsim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn verify_slany6_passes() {
    let (code, out, err) = nsim(&["verify", "slany6"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(err.contains("PASS slany6(6)"));
    assert_eq!(json(&out)[0]["data"]["value"], "RedWins");
}

#[test]
fn preset_thm2_emits_nine_edges() {
    let (code, out, _) = nsim(&["preset", "thm2", "--n", "6"]);
    assert_eq!(code, EXIT_OK);
    let p = parse_position(&out).unwrap();
    assert_eq!(p.n(), 6);
    assert_eq!(p.colored().len(), 9);
    assert_eq!(
        out.trim(),
        r#"{"n":6,"green":[[0,1],[0,4],[1,2],[2,3],[3,4]],"red":[[0,3],[1,3],[1,4],[2,4]]}"#
    );
}

#[test]
fn missing_file_is_usage_error() {
    let (code, out, err) = nsim(&["solve", "definitely-not-here.json"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("definitely-not-here.json"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(nsim(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(nsim(&["verify", "nope"]).0, EXIT_USAGE);
    assert_eq!(nsim(&["preset", "thm2", "--n", "11"]).0, EXIT_USAGE);
    assert_eq!(nsim(&["preset", "nothing"]).0, EXIT_USAGE);
    assert_eq!(nsim(&["solve"]).0, EXIT_USAGE);
    assert_eq!(nsim(&["solve", "--preset", "thm2", "--max-nodes", "0"]).0, EXIT_USAGE);
    let f = temp_file("dead.json", r#"{"n":4,"green":[[0,1],[0,2],[1,2]],"red":[[0,3],[1,3]]}"#);
    assert_eq!(nsim(&["solve", "--preset", "thm2", f.to_str().unwrap()]).0, EXIT_USAGE);
    let garbage = temp_file("garbage.json", "{not json");
    assert_eq!(nsim(&["solve", garbage.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn solve_output_shape() {
    let (code, out, _) = nsim(&["solve", "--preset", "prop-T", "--n", "7"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["value"], "GreenWins");
    assert!(v["stats"]["nodes"].as_u64().unwrap() > 0);
}

#[test]
fn budget_exhaustion_exits_three() {
    let (code, _, err) = nsim(&["solve", "--preset", "thm3", "--n", "7", "--max-nodes", "5"]);
    assert_eq!(code, EXIT_BUDGET, "{err}");
    let (code, _, _) = nsim(&["verify", "thm3", "--n", "7", "--max-nodes", "5"]);
    assert_eq!(code, EXIT_BUDGET);
}

#[test]
fn preset_solve_round_trip() {
    for (args, name) in [
        (vec!["thm2", "--n", "6"], PresetName::Thm2 { n: 6 }),
        (vec!["thm3", "--n", "6"], PresetName::Thm3 { n: 6 }),
        (vec!["prop-T", "--n", "7"], PresetName::PropT { n: 7 }),
    ] {
        let (_, doc, _) = nsim(&[&["preset"][..], &args].concat());
        let f = temp_file(&format!("{name}.json"), &doc);
        let (code, out, _) = nsim(&["solve", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let expected = solve(&build_preset(name).unwrap(), SolveOptions::default()).unwrap().value;
        assert_eq!(json(&out)["value"], serde_json::to_value(expected).unwrap(), "{name}");
    }
}

#[test]
fn binary_reads_stdin() {
    let bin = env!("CARGO_BIN_EXE_nsim");
    let doc = Command::new(bin).args(["preset", "thm2", "--n", "7"]).output().unwrap().stdout;
    let mut child = Command::new(bin).args(["solve", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(&doc).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(std::str::from_utf8(&out.stdout).unwrap())["value"], "RedWins");
}

#[test]
fn output_is_deterministic_outside_stats() {
    for args in [
        &["solve", "--preset", "thm3", "--n", "6"][..],
        &["best-moves", "--preset", "thm2", "--n", "7"],
        &["reply", "--preset", "prop-T", "--n", "7"],
        &["orbits", "--preset", "thm1"],
        &["canon", "--preset", "drawn-k5", "--n", "6"],
    ] {
        let a = json(&nsim(args).1);
        let b = json(&nsim(args).1);
        assert_eq!(without_stats(a), without_stats(b), "{args:?}");
    }
    assert_eq!(nsim(&["preset", "thm1"]).1, nsim(&["preset", "thm1"]).1);
}

#[test]
fn best_moves_and_reply() {
    let (_, out, _) = nsim(&["best-moves", "--preset", "thm2", "--n", "7"]);
    let v = json(&out);
    assert_eq!(v["value"], "RedWins");
    assert_eq!(v["to_move"], "red");
    let moves = v["moves"].as_array().unwrap();
    let completing = moves.iter().find(|m| m["edge"] == serde_json::json!([0, 2])).unwrap();
    assert_eq!(completing["value"], "GreenWins");

    let (_, out, _) = nsim(&["reply", "--preset", "prop-T", "--n", "7"]);
    let v = json(&out);
    assert_eq!(v["edge"], serde_json::json!([5, 6]));
    assert_eq!(v["color"], "green");
}

#[test]
fn status_and_symmetry_commands() {
    let v = json(&nsim(&["status", "--preset", "drawn-k5"]).1);
    assert_eq!(v["status"]["state"], "Draw");

    let k5 = temp_file("k5.json", &nsim(&["preset", "drawn-k5"]).1);
    let k5 = k5.to_str().unwrap();
    let (code, out, _) = nsim(&["iso", k5, k5, "--swap"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["isomorphic"], true);

    let other = temp_file("other.json", r#"{"n":5,"green":[[0,1]],"red":[]}"#);
    let (code, out, _) = nsim(&["iso", k5, other.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(json(&out)["witness"], Value::Null);

    let v = json(&nsim(&["orbits", "--preset", "thm1"]).1);
    assert_eq!(v["orbit_count"], 1);
    assert_eq!(v["automorphisms"], 200);

    assert_eq!(nsim(&["canon", "--preset", "thm1"]).0, EXIT_USAGE);
}
