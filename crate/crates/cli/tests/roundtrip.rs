//! Documents emitted by one subcommand are accepted by the next; exit
//! statuses follow the documented convention.

use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_kodaira-kit");

fn run(args: &[&str]) -> (i32, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn json(args: &[&str]) -> Value {
    let (code, out) = run(args);
    assert_eq!(code, 0, "{args:?} exited {code}: {out}");
    serde_json::from_str(&out).expect("valid JSON")
}

#[test]
fn standard_cocycle_feeds_degree_and_check() {
    for (n, d) in [(1, 3), (2, -2), (3, 1)] {
        let doc = json(&["picard", "standard", "--n", &n.to_string(), "--d", &d.to_string()]).to_string();
        assert_eq!(json(&["picard", "degree", "--cocycle", &doc])["degree"], d);
        assert_eq!(json(&["picard", "check", "--cocycle", &doc])["cocycle_condition"], true);
        let dual = json(&["picard", "dual", "--cocycle", &doc]).to_string();
        assert_eq!(json(&["picard", "degree", "--cocycle", &dual])["degree"], -d);
        let t = json(&["picard", "tensor", "--a", &doc, "--b", &dual]).to_string();
        assert_eq!(json(&["picard", "degree", "--cocycle", &t])["degree"], 0);
    }
}

#[test]
fn principal_divisor_feeds_bundle() {
    let f = r#"{"vars":["z"],"num":{"terms":[{"exponents":[2],"coefficient":1},{"exponents":[0],"coefficient":-4}]},"den":{"terms":[{"exponents":[3],"coefficient":1}]}}"#;
    let div = json(&["divisor", "principal", "--function", f]);
    assert_eq!(div["degree"], 0);
    let bundle = json(&["divisor", "bundle", "--divisor", &div.to_string()]);
    assert_eq!(bundle["degree"], 0);
    assert_eq!(json(&["picard", "check", "--cocycle", &bundle.to_string()])["cocycle_condition"], true);
    let (code, _) = run(&["divisor", "equiv", "--a", &div.to_string(), "--b", r#"{"terms":[]}"#]);
    assert_eq!(code, 0);
}

#[test]
fn section_forms_feed_kodaira_map() {
    let d = r#"{"terms":[{"point":"1/2","coefficient":2},{"point":"inf","coefficient":1}]}"#;
    let s = json(&["divisor", "sections", "--divisor", d]);
    assert_eq!(s["dim"], 4);
    assert_eq!(s["dim"], s["cech_dim"]);
    let forms = s["forms"].to_string();
    let (code, out) = run(&["kodaira", "inject", "--d", "3", "--basis", &forms]);
    assert_eq!(code, 0, "{out}");
    let (code, _) = run(&["kodaira", "basepoints", "--d", "3", "--basis", &forms]);
    assert_eq!(code, 0);
}

#[test]
fn map_images_feed_samples() {
    let m = json(&["kodaira", "map", "--d", "2", "--samples", r#"[["1","2"],["1","-1/3"],["0","1"]]"#]);
    let images: Vec<Value> = m["images"].as_array().unwrap().iter().map(|r| r["image"].clone()).collect();
    let images = Value::Array(images).to_string();
    let (code, out) = run(&["kodaira", "inject", "--n", "2", "--d", "1", "--samples", &images]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn curvature_entries_are_metrics() {
    let c = json(&["curvature", "--fs", "2"]);
    let top = c["entries"][1][1].to_string();
    let again = json(&["curvature", "--metric", &top]);
    assert_eq!(again["n"], 2);
    let (code, _) = run(&["positivity", "--fs", "2", "--chart", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn malformed_input_exits_two() {
    for args in [
        vec!["picard", "check", "--cocycle", "{not json"],
        vec!["picard", "check", "--cocycle", r#"{"n":1}"#],
        vec!["divisor", "sections", "--divisor", r#"{"terms":[{"point":"x","coefficient":1}]}"#],
        vec!["blowup", "transition", "--n", "2", "--j", "0", "--k", "1"],
        vec!["cohomology", "--n", "1"],
    ] {
        assert_eq!(run(&args).0, 2, "{args:?}");
    }
    assert_eq!(run_env(&["selftest"], &[("KODAIRA_KIT_THREADS", "0")]).0, 2);
}

#[test]
fn negative_verdicts_exit_one() {
    assert_eq!(run(&["kodaira", "inject", "--d", "0"]).0, 1);
    assert_eq!(run(&["kodaira", "basepoints", "--d", "2", "--basis", r#"{"n":1,"d":2,"sections":[{"terms":[{"exponents":[2,0],"coefficient":1}]},{"terms":[{"exponents":[1,1],"coefficient":1}]}]}"#]).0, 1);
    let (code, _) = run(&["divisor", "equiv", "--a", r#"{"terms":[{"point":"0","coefficient":1}]}"#, "--b", r#"{"terms":[]}"#]);
    assert_eq!(code, 1);
}

#[test]
fn output_is_reproducible() {
    let args = ["kodaira", "two-point", "--n", "2", "--d", "1"];
    let a = run_env(&args, &[("KODAIRA_KIT_THREADS", "1")]);
    let b = run_env(&args, &[("KODAIRA_KIT_THREADS", "4")]);
    assert_eq!(a, b);
    let t = run(&["--format", "table", "cohomology", "--n", "2", "--d", "-3", "--q", "2"]);
    assert_eq!(t.0, 0);
    assert!(!t.1.is_empty());
}
