use std::process::{Command, Output};

use serde_json::Value;

fn gfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(out)).expect("json output")
}

fn term(v: &Value, a: u64, b: u64, c: u64) -> Option<String> {
    v["terms"].as_array()?.iter().find_map(|t| {
        let t = t.as_array()?;
        (t[0] == a && t[1] == b && t[2] == c).then(|| t[3].as_str().unwrap().to_string())
    })
}

#[test]
fn avoidance_coefficient_for_122() {
    for method in ["cluster", "automaton", "oracle"] {
        let v = json(&gfo(&[
            "gf",
            "--pattern",
            "122",
            "--max-weight",
            "8",
            "--z0",
            "--format",
            "json",
            "--method",
            method,
        ]));
        assert_eq!(v["max_weight"], 8);
        assert_eq!(term(&v, 4, 7, 0).as_deref(), Some("13"), "method {method}");
        assert!(v["terms"].as_array().unwrap().iter().all(|t| t[2] == 0));
    }
}

#[test]
fn methods_agree_byte_for_byte() {
    let run = |m: &str| {
        stdout(&gfo(&[
            "gf",
            "--pattern",
            "2,1,2",
            "--max-weight",
            "9",
            "--method",
            m,
        ]))
    };
    let cluster = run("cluster");
    assert_eq!(cluster, run("automaton"));
    assert_eq!(cluster, run("oracle"));
    assert!(cluster.starts_with("1*x^0*y^0*z^0\n"));
}

#[test]
fn chart_k4_m2_has_three_rows() {
    let v = json(&gfo(&["chart", "--k", "4", "--m", "2", "--format", "json"]));
    let rows = v["rows"].as_array().unwrap();
    let lengths: Vec<u64> = rows.iter().map(|r| r["length"].as_u64().unwrap()).collect();
    assert_eq!(lengths, [5, 6, 7]);
    assert_eq!(rows[0]["counts"]["1,2"], 1);
    assert_eq!(rows[2]["counts"]["2"], 2);

    let text = stdout(&gfo(&["chart", "--k", "4", "--m", "2"]));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn recover_3123() {
    let out = gfo(&["recover", "--pattern", "3123"]);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"k":4,"lambda":[3,3,2,1],"matrix":[[1],[3,1],[6,3,1]],"ddagger":[3,12,29]}"#
    );
}

#[test]
fn output_independent_of_jobs() {
    let gf = |j: &str| {
        gfo(&[
            "gf",
            "--pattern",
            "131",
            "--max-weight",
            "10",
            "--method",
            "oracle",
            "--jobs",
            j,
        ])
    };
    assert_eq!(gf("1").stdout, gf("4").stdout);
    let cl = |j: &str| {
        gfo(&[
            "classify",
            "--max-factor-weight",
            "4",
            "--max-word-weight",
            "9",
            "--jobs",
            j,
        ])
    };
    let one = cl("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, cl("3").stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["W"], 9);
    assert!(v["wilf_strong_mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn mu_lowest_weight_is_pattern_weight() {
    let v = json(&gfo(&[
        "mu",
        "--pattern",
        "212",
        "--max-weight",
        "7",
        "--format",
        "json",
    ]));
    let min_b = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t[1].as_u64().unwrap())
        .min();
    assert_eq!(min_b, Some(5));
    assert_eq!(term(&v, 3, 5, 1).as_deref(), Some("1"));
}

#[test]
fn automaton_dump_shape() {
    let v = json(&gfo(&["automaton-dump", "--pattern", "12"]));
    assert_eq!(v["k"], 2);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    assert_eq!(v["states"][0], serde_json::json!([0]));
}

#[test]
fn verify_suite_passes() {
    let out = gfo(&["verify", "--suite", "paper", "--seed", "7"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(text.contains("seed 7"));
}

#[test]
fn light_truncation_warns() {
    let out = gfo(&["gf", "--pattern", "33", "--max-weight", "4"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["gf", "--pattern", "", "--max-weight", "4"][..],
        &["gf", "--pattern", "102", "--max-weight", "4"],
        &["gf", "--pattern", "12", "--max-weight", "0"],
        &["gf", "--pattern", "12"],
        &["chart", "--k", "1", "--m", "2"],
        &["gf", "--pattern", "12", "--max-weight", "4", "--bogus"],
        &[
            "classify",
            "--max-factor-weight",
            "6",
            "--max-word-weight",
            "4",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(gfo(args).status.code(), Some(2), "{args:?}");
    }
}
