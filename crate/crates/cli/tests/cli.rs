use std::path::PathBuf;
use std::process::{Command, Output};

use polyball::ratlin::parse_rational;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
        .to_str()
        .unwrap()
        .to_string()
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polyball"));
    cmd.args(args).env_remove("POLYBALL_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn temp_problem(tag: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("polyball-cli-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn square_has_four_vertices() {
    let out = run(&["vertices", "--input", &fixture("square")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "vertex_count: 4"), "{text}");
}

#[test]
fn output_is_byte_deterministic_across_thread_counts() {
    for args in [
        vec!["--format", "json", "demo", "y2-closure"],
        vec!["--format", "json", "demo", "lastex"],
        vec!["demo", "y3"],
        vec!["--format", "json", "verify", "--input", "FIXTURE", "--random", "5"],
    ] {
        let w1 = fixture("w1");
        let args: Vec<&str> = args.iter().map(|a| if *a == "FIXTURE" { w1.as_str() } else { a }).collect();
        let one = run_with_env(&args, &[("POLYBALL_THREADS", "1")]);
        let four = run_with_env(&args, &[("POLYBALL_THREADS", "4")]);
        let default = run(&args);
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.stdout, default.stdout, "{args:?}");
    }
}

fn collect_strings<'a>(v: &'a Value, out: &mut Vec<&'a str>) {
    match v {
        Value::String(s) => out.push(s),
        Value::Array(items) => items.iter().for_each(|i| collect_strings(i, out)),
        Value::Object(m) => m.values().for_each(|i| collect_strings(i, out)),
        _ => {}
    }
}

#[test]
fn json_reports_round_trip_rationals() {
    let out = run(&["--format", "json", "demo", "y2-closure"]);
    let report = stdout_json(&out);
    let vertices = report["vertices"]["vertices"].as_array().unwrap();
    let mut strings = Vec::new();
    for v in vertices {
        collect_strings(&v["beta"], &mut strings);
        collect_strings(&v["point"], &mut strings);
    }
    assert!(!strings.is_empty());
    for s in strings {
        let q = parse_rational(s).unwrap();
        assert_eq!(q.to_string(), s);
    }
    let again: Value = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn reports_use_one_based_coordinates() {
    let out = run(&["--format", "json", "components", "--input", &fixture("square")]);
    let report = stdout_json(&out);
    let coords: Vec<u64> = report["components"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["coordinates"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()))
        .collect();
    let mut sorted = coords.clone();
    sorted.sort();
    assert_eq!(sorted, vec![1, 2]);
}

#[test]
fn query_on_square() {
    let edge = run(&["--format", "json", "query", "--input", &fixture("square"), "--beta", "1,0"]);
    assert_eq!(edge.status.code(), Some(0));
    let q = &stdout_json(&edge)["query"];
    assert_eq!(q["tight"], serde_json::json!([{ "coordinate": 1, "sign": "+" }]));
    assert_eq!(q["is_extreme"], Value::Bool(false));
    assert_eq!(q["face_dim"], 1);

    let corner = run(&["--format", "json", "query", "--input", &fixture("square"), "--beta", "(1, -1)"]);
    let q = &stdout_json(&corner)["query"];
    assert_eq!(q["is_extreme"], Value::Bool(true));
    assert_eq!(q["is_maximal_star_constant"], Value::Bool(true));
}

#[test]
fn query_beta_from_file() {
    let path =
        temp_problem("qb", r#"{ "version": 1, "basis": [["3","0","2"],["0","3","2"]], "query_beta": ["1/4","1/4"] }"#);
    let out = run(&["--format", "json", "query", "--input", &path]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let q = &stdout_json(&out)["query"];
    assert_eq!(q["norm"], "1");
    assert_eq!(q["face_dim"], 1);
}

#[test]
fn embed_decides_target_dimension() {
    let yes = stdout_json(&run(&["--format", "json", "embed", "--input", &fixture("w1"), "--s", "3"]));
    assert_eq!(yes["space"]["embeddable_into_s"], Value::Bool(true));
    assert_eq!(yes["space"]["embeddable_min_s"], 3);
    let no = stdout_json(&run(&["--format", "json", "embed", "--input", &fixture("w1"), "--s", "2"]));
    assert_eq!(no["space"]["embeddable_into_s"], Value::Bool(false));
    assert_eq!(no["embedding"]["target_dim"], 3);
}

#[test]
fn demo_list_names_every_fixture() {
    let out = run(&["--format", "json", "demo", "--list"]);
    let report = stdout_json(&out);
    let names: Vec<&str> = report["demos"].as_array().unwrap().iter().map(|d| d["name"].as_str().unwrap()).collect();
    for name in ["optimal", "y2-closure", "y3", "w1", "w2", "lastex", "hexagon", "prop13", "weak-vs-strict"] {
        assert!(names.contains(&name), "{name}");
    }
    assert!(report["demos"].as_array().unwrap().iter().all(|d| !d["source"].as_str().unwrap().is_empty()));
}

#[test]
fn input_errors_exit_one() {
    let cases: Vec<Vec<String>> = vec![
        vec!["facets".into(), "--input".into(), "/nonexistent/problem.json".into()],
        vec!["demo".into(), "no-such-demo".into()],
        vec!["opspace".into(), "--input".into(), fixture("w1")],
        vec!["query".into(), "--input".into(), fixture("square")],
        vec!["query".into(), "--input".into(), fixture("square"), "--beta".into(), "1/2,0".into()],
        vec!["query".into(), "--input".into(), fixture("square"), "--beta".into(), "2,0".into()],
        vec!["query".into(), "--input".into(), fixture("square"), "--beta".into(), "1,0,0".into()],
        vec!["query".into(), "--input".into(), fixture("square"), "--beta".into(), "0.5,1".into()],
        vec!["frobnicate".into()],
        vec!["--format".into(), "xml".into(), "demo".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn invalid_problem_files_exit_one_with_named_invariant() {
    let cases = [
        (r#"{ "version": 1, "basis": [["1","2"],["2","4"]] }"#, "linearly"),
        (r#"{ "version": 3, "basis": [["1"]] }"#, "version"),
        (r#"{ "version": 1, "extreme_points": [["1","0"],["0","1"],["1/2","1/2"]], "n": 1 }"#, "extreme"),
        (r#"{ "version": 1, "basis": [[0.5]] }"#, "floating"),
    ];
    for (k, (body, needle)) in cases.iter().enumerate() {
        let path = temp_problem(&format!("bad{k}"), body);
        let out = run(&["facets", "--input", &path]);
        std::fs::remove_file(&path).ok();
        assert_eq!(out.status.code(), Some(1), "{body}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.to_lowercase().contains(needle), "{body}: {err}");
    }
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let out = run_with_env(&["demo", "square"], &[("POLYBALL_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("verify"));
}

#[test]
fn closure_inputs_carry_provenance() {
    let out = stdout_json(&run(&["--format", "json", "facets", "--input", &fixture("prop13")]));
    assert_eq!(out["provenance"], "user-supplied closure");
    let out = stdout_json(&run(&["--format", "json", "facets", "--input", &fixture("w1")]));
    assert!(out.get("provenance").is_none());
}

#[test]
fn every_certificate_ships_its_beta() {
    for name in ["optimal", "y3", "weak-vs-strict", "prop13"] {
        let out = stdout_json(&run(&["--format", "json", "components", "--input", &fixture(name)]));
        for c in out["components"]["classes"].as_array().unwrap() {
            let weak = matches!(c["verdict"].as_str(), Some("strict") | Some("weak_only"));
            assert_eq!(weak, c.get("beta").is_some(), "{name}: {c}");
        }
    }
}
