use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_param-atlas"));
    cmd.env_remove("PARAM_ATLAS_BUDGET");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "args {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).expect("valid json")
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
}

const JSON_CASES: &[&[&str]] = &[
    &["--group", "gsp4", "census"],
    &["--group", "gsp6", "census"],
    &["--group", "sl2", "--ell", "2", "census"],
    &["--group", "sl2", "--q", "3", "bg-ring"],
    &["--group", "gl1", "--q", "5", "bg-ring"],
    &["--group", "u2", "--q", "3", "bg-ring"],
    &["--group", "u3", "coverage"],
    &["--group", "gsp6", "coverage"],
    &["oracle", "twisted", "--order", "4", "--twist", "inv"],
    &["oracle", "twisted", "--moduli", "2,2", "--twist", "id"],
    &["--group", "sl2", "--ell", "5", "--q", "7", "oracle", "commutant", "--sigma", "1,1;0,1"],
    &["--group", "sl2", "--ell", "5", "--field-degree", "2", "--q", "3", "oracle", "classify", "--sigma", "1,1;0,1"],
    &["--group", "gl2", "--ell", "5", "--q", "4", "oracle", "classify", "--sigma", "1,1;0,1"],
    &["--group", "gl3", "--ell", "31", "--q", "7", "oracle", "avoidant", "--levi", "1,1,1", "--m", "2,0,0;0,3,0;0,0,5"],
    &["--group", "sl2", "--ell", "5", "--q", "4", "oracle", "jacobian", "--sigma", "1,1;0,1", "--phi", "2,0;0,3"],
    &["--group", "sl2", "--ell", "5", "--q", "7", "oracle", "jacobian"],
    &["--group", "sl2", "--ell", "5", "--q", "7", "oracle", "eval", "--trials", "5"],
    &["--group", "gl1", "--ell", "13", "--q", "5", "oracle", "count-points"],
];

#[test]
fn every_json_output_matches_the_schema() {
    let schema = schema();
    for args in JSON_CASES {
        let value = json(args);
        if let Err(errors) = schema.validate(&value) {
            let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
            panic!("{args:?} violates schema: {msgs:?}");
        }
        assert_eq!(value["schema_version"], 1);
    }
}

#[test]
fn schema_rejects_a_mislabelled_result() {
    let schema = schema();
    let mut value = json(&["--group", "sl2", "--q", "3", "bg-ring"]);
    value["command"] = Value::from("census");
    assert!(!schema.is_valid(&value));
}

#[test]
fn gsp4_census_text() {
    let expected = "\
census: GSp4, q=3, ell=-
label  partition  rank  component_group  twisted_class
C_0    (1,1,1,1)  0     trivial          1
C_1    (2,1,1)    1     trivial          1
C_2A   (2,2)      2     Z/2              0
C_2B   (2,2)      2     Z/2              1
C_3    (4)        3     trivial          1
";
    assert_eq!(stdout(&["--group", "gsp4", "census"]), expected);
}

#[test]
fn sl2_census_drops_ell_torsion() {
    let text = stdout(&["--group", "sl2", "--ell", "2", "census"]);
    assert_eq!(text.lines().filter(|l| l.starts_with("C_")).count(), 2);
    let v = json(&["--group", "sl2", "--ell", "5", "--q", "7", "census"]);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn bg_ring_text() {
    assert_eq!(
        stdout(&["--group", "sl2", "--q", "3", "bg-ring"]),
        "ring: B_G(SL2, q=3)\ngenerators: c\ninvertible: none\nrelation: c^3 - 4*c\n"
    );
    assert_eq!(
        stdout(&["--group", "gl1", "--q", "5", "bg-ring"]),
        "ring: B_G(GL1, q=5)\ngenerators: x\ninvertible: x\nrelation: x^5 - x\n"
    );
}

#[test]
fn u3_coverage_text() {
    let expected = "\
coverage: U3, q=3, ell=-
label  partition  covered  witness  reason
C_0    (1,1,1)    yes      [1,1,1]  regular-in-levi
C_1    (2,1)      no       -        no-gamma-stable-levi
C_2    (3)        yes      [3]      regular-in-levi
covered: 2 of 3
";
    assert_eq!(stdout(&["--group", "u3", "coverage"]), expected);
}

#[test]
fn gsp6_coverage_flags_distinguished_class() {
    let v = json(&["--group", "gsp6", "coverage"]);
    let verdicts = v["result"]["verdicts"].as_array().unwrap();
    let bad: Vec<&Value> = verdicts.iter().filter(|v| v["covered"] == false).collect();
    assert!(!bad.is_empty());
    let distinguished: Vec<&&Value> = bad.iter().filter(|v| v["reason"] == "distinguished-non-regular").collect();
    assert_eq!(distinguished.len(), 2);
    for v in distinguished {
        assert_eq!(v["partition"], serde_json::json!([4, 2]));
    }
}

#[test]
fn twisted_count_text() {
    let text = stdout(&["oracle", "twisted", "--order", "4", "--twist", "inv"]);
    assert!(text.contains("twisted classes: 2\n"), "{text}");
    assert!(text.contains("brute force: 2\n"), "{text}");
}

#[test]
fn commutant_counts_match_enumeration() {
    let v = json(&["--group", "sl2", "--ell", "5", "--q", "7", "oracle", "commutant", "--sigma", "1,1;0,1"]);
    assert_eq!(v["result"]["solutions"], 0);
    let v = json(&[
        "--group",
        "sl2",
        "--ell",
        "5",
        "--field-degree",
        "2",
        "--q",
        "3",
        "oracle",
        "classify",
        "--sigma",
        "1,1;0,1",
    ]);
    assert_eq!(v["result"]["solutions"], 50);
    assert_eq!(v["result"]["class_count"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--group", "gl2", "census"]).status.code(), Some(0));
    assert_eq!(run(&["--group", "gl2", "--q", "6", "census"]).status.code(), Some(2));
    assert_eq!(run(&["--group", "e8", "census"]).status.code(), Some(2));
    assert_eq!(run(&["census"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--group", "gl2", "--q", "3", "--ell", "3", "census"]).status.code(), Some(2));
    let over = run(&[
        "--group",
        "sl2",
        "--ell",
        "5",
        "--field-degree",
        "2",
        "--q",
        "3",
        "--budget",
        "100",
        "oracle",
        "commutant",
        "--sigma",
        "1,1;0,1",
    ]);
    assert_eq!(over.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&over.stderr).starts_with("error:"));
}

#[test]
fn budget_is_read_from_environment() {
    let out = bin()
        .env("PARAM_ATLAS_BUDGET", "100")
        .args([
            "--group",
            "sl2",
            "--ell",
            "5",
            "--field-degree",
            "2",
            "--q",
            "3",
            "oracle",
            "commutant",
            "--sigma",
            "1,1;0,1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    for args in JSON_CASES {
        let mut full = vec!["--output", "json", "--seed", "7"];
        full.extend_from_slice(args);
        assert_eq!(run(&full).stdout, run(&full).stdout, "{args:?}");
    }
}

#[test]
fn seed_is_recorded_in_config() {
    let v = json(&["--seed", "42", "--group", "sl2", "--ell", "5", "--q", "7", "oracle", "eval", "--trials", "3"]);
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["result"]["pass"], true);
}
