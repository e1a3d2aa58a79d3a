use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_congruent"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&ok(&all)).unwrap()
}

#[test]
fn doubling_example() {
    assert_eq!(ok(&["double", "--area", "6", "1/2"]), "24/25\n");
    assert_eq!(
        ok(&["double", "--area", "6", "--times", "2", "1/2"]),
        "24/25\n117600/1442401\n"
    );
    assert_eq!(
        json(&["double", "--area", "6", "1/2"]),
        serde_json::json!(["24/25"])
    );
}

#[test]
fn halving_a_non_double_is_a_domain_error() {
    let o = run(&["halve", "--area", "5", "4/5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("descent not applicable: 1−t, 1+t not both squares"));
    assert_eq!(
        ok(&["halve", "--area", "6", "24/25"]),
        "t=1/2 u=4/5 v=3/5\n"
    );
}

#[test]
fn area_34_generators() {
    let o = run(&["generators", "--area", "34", "--denom-bound", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "t=8/9 W=(1,17) cert=2/27\nt=8/17 W=(17,17) cert=30/289\nt=32/49 W=(17,1) cert=36/343\n"
    );
    assert!(stderr(&o).contains("completeness is not certified"));

    let explicit = ok(&["generators", "--area", "34", "--reps", "0,8/17,8/9,32/49"]);
    assert_eq!(explicit, stdout(&o));
}

#[test]
fn area_6_generators() {
    assert_eq!(
        ok(&["generators", "--area", "6", "--reps", "0,1/2"]),
        "t=1/2 W=(2,6) cert=1/4\n"
    );
}

#[test]
fn add_and_sub() {
    assert_eq!(ok(&["add", "--area", "6", "1/2", "24/25"]), "1/2\n");
    assert_eq!(ok(&["sub", "--area", "6", "1/2", "24/25"]), "529/2738\n");
    assert_eq!(ok(&["add", "--area", "6", "1/2", "0"]), "1/2\n");
    assert_eq!(ok(&["sub", "--area", "6", "1/2", "1/2"]), "0\n");
}

#[test]
fn triangles_and_parameters() {
    assert_eq!(ok(&["param", "3,4,5"]), "1/2\n");
    assert_eq!(
        ok(&["param", "--area", "6", "3,4,5"]),
        "t=1/2 W=(2,6) cert=1/4\n"
    );
    assert_eq!(ok(&["triangle", "529/2738"]), "7216803,2896804,7776485\n");
    assert_eq!(
        ok(&["double", "--int", "3,4,5", "--times", "2"]),
        "49,1200,1201\n2066690884801,339252715200,2094350404801\n"
    );
    let o = run(&["param", "--area", "5", "3,4,5"]);
    assert_eq!(
        o.status.code(),
        Some(1),
        "3,4,5 has area 6, not 5 up to squares"
    );
}

#[test]
fn curve_operations() {
    assert_eq!(
        ok(&["curve", "--area", "6", "double", "12,36"]),
        "25/4,-35/8\n"
    );
    assert_eq!(
        ok(&["curve", "--area", "6", "phi-inv", "25/4,-35/8"]),
        "24/25\n"
    );
    assert_eq!(ok(&["curve", "--area", "6", "phi", "1/2"]), "12,36\n");
    assert_eq!(ok(&["curve", "--area", "6", "phi-inv", "6,0"]), "0\n");
    assert_eq!(
        ok(&["curve", "--area", "6", "add", "12,36", "25/4,-35/8"]),
        "16428/529,-2065932/12167\n"
    );
    assert_eq!(
        ok(&["curve", "--area", "6", "mul", "2", "12,36"]),
        "25/4,-35/8\n"
    );
    assert_eq!(
        ok(&["curve", "--area", "6", "sub", "12,36", "12,36"]),
        "O\n"
    );
    assert_eq!(ok(&["curve", "--area", "6", "isogeny", "-2,8"]), "-3,9\n");
    assert_eq!(
        ok(&["curve", "--area", "6", "triangle", "25/4,-35/8"]),
        "7/10,120/7,1201/70\n"
    );
    assert_eq!(ok(&["curve", "psi", "3,4,5"]), "25/4,-35/8 on E_6\n");
}

#[test]
fn quadratic_triangles() {
    assert_eq!(
        ok(&["quad", "diff", "1/2*sqrt(6),2/3*sqrt(6),5/6*sqrt(6)"]),
        "7/10,120/7,1201/70\npoint=25/4,-35/8 on E_6\n"
    );
    let o = run(&[
        "quad",
        "sum",
        "--area",
        "1",
        "1/2*sqrt(6),2/3*sqrt(6),5/6*sqrt(6)",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["quad", "diff", "3,4,5"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn reduce_prints_a_verified_chain() {
    let out = ok(&["reduce", "--area", "6", "--reps", "0,1/2", "117600/1442401"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.last(), Some(&"final=1/2"));
    assert!(lines.iter().any(|l| l.contains("= 4·(1/2)")), "{out}");
    let v = json(&["reduce", "--area", "6", "--reps", "0,1/2", "117600/1442401"]);
    assert_eq!(v["final"], "1/2");
    assert_eq!(v["steps"].as_array().unwrap().len(), 2);
}

#[test]
fn missing_coset_is_a_domain_error() {
    let t = ok(&["double", "--area", "34", "--times", "2", "8/9"]);
    let big = t.lines().last().unwrap();
    let sum = ok(&["add", "--area", "34", big, "8/17"]);
    let o = run(&["reduce", "--area", "34", "--reps", "0,8/9", sum.trim()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("W-image"));
}

#[test]
fn json_and_text_carry_the_same_values() {
    let text = ok(&["search", "--area", "34", "--denom-bound", "100"]);
    let v = json(&["search", "--area", "34", "--denom-bound", "100"]);
    let from_json: Vec<String> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            format!(
                "t={} W=({},{}) cert={}",
                r["t"].as_str().unwrap(),
                r["w1"].as_str().unwrap(),
                r["w2"].as_str().unwrap(),
                r["cert"].as_str().unwrap()
            )
        })
        .collect();
    assert_eq!(text.lines().collect::<Vec<_>>(), from_json);

    let point = json(&["curve", "--area", "6", "double", "12,36"]);
    assert_eq!(point, serde_json::json!({ "x": "25/4", "y": "-35/8" }));
}

#[test]
fn printed_rationals_reparse() {
    let out = ok(&["double", "--area", "6", "--times", "3", "1/2"]);
    for line in out.lines() {
        assert_eq!(ok(&["add", "--area", "6", line, "0"]), format!("{line}\n"));
        // doubles lie in the kernel of W
        assert_eq!(ok(&["wmap", line]), "(1,1)\n");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["search", "--area", "5", "--denom-bound", "300"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn search_reports_square_leg_counts() {
    let out = ok(&[
        "search",
        "--area",
        "34",
        "--denom-bound",
        "100",
        "--square-legs",
    ]);
    assert_eq!(out.lines().last(), Some("square-leg: 3 of 3"));
    let empty = ok(&["search", "--area", "1", "--denom-bound", "200"]);
    assert_eq!(empty, "");
}

#[test]
fn cache_round_trip_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.jsonl");
    let p = path.to_str().unwrap();
    let first = ok(&[
        "search",
        "--area",
        "34",
        "--denom-bound",
        "100",
        "--cache",
        p,
    ]);
    let stored = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stored.lines().count(), 1);
    assert!(stored.contains("\"8/9\""));

    let second = ok(&[
        "search",
        "--area",
        "34",
        "--denom-bound",
        "100",
        "--cache",
        p,
    ]);
    assert_eq!(first, second);
    let smaller = ok(&[
        "search",
        "--area",
        "34",
        "--denom-bound",
        "20",
        "--cache",
        p,
    ]);
    assert_eq!(
        smaller,
        "t=8/9 W=(1,17) cert=2/27\nt=8/17 W=(17,17) cert=30/289\n"
    );
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stored);

    // a forged entry fails re-certification and is recomputed
    std::fs::write(
        &path,
        "{\"area\":\"34\",\"bound\":100,\"params\":[\"1/2\"]}\n",
    )
    .unwrap();
    let o = run(&[
        "search",
        "--area",
        "34",
        "--denom-bound",
        "100",
        "--cache",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), first);
    assert!(stderr(&o).contains("does not verify"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["double", "1/2"],
        vec!["double", "--area", "6", "3/2"],
        vec!["double", "--area", "0", "1/2"],
        vec!["curve", "--area", "6", "double", "1,1"],
        vec!["param", "3,4,6"],
        vec!["cosets", "--area", "1/2"],
        vec!["generators", "--area", "6"],
        vec!["wmap", "1/2", "--factor-bound", "1"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn incomplete_factorization_is_reported() {
    let o = run(&["wmap", "2/1571", "--factor-bound", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("incomplete"));
    assert_eq!(ok(&["wmap", "2/1571"]), "(2464899,20423)\n");
}
