use std::process::{Command, Output};

fn gliderep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gliderep"))
        .args(args)
        .env_remove("GLIDEREP_ORDER_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn hasse_dot_has_the_quaternion_edges() {
    let o = gliderep(&["hasse", "--group", "Q8", "--chain", "Z2,Z4j"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    for edge in [
        "\"U\" -- \"V1\"",
        "\"U\" -- \"V2\"",
        "\"T3\" -- \"V4\"",
        "\"T4\" -- \"V4\"",
        "\"V4\" -- \"T\"",
        "\"V1\" -- \"S\"",
    ] {
        assert!(dot.contains(edge), "missing {edge}");
    }
    assert_eq!(dot.matches(" -- ").count(), 10);
    assert_eq!(stdout(&gliderep(&["hasse", "--group", "Q8", "--chain", "Z2,Z4j"])), dot);
}

#[test]
fn trivial_group_table() {
    let o = gliderep(&["group", "--make", "cyclic:1", "--print"]);
    assert_eq!(stdout(&o).trim(), r#"{"name":"C1","order":1,"table":[[0]]}"#);
}

#[test]
fn group_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("gliderep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q8.json");
    let p = path.to_str().unwrap();
    let first = gliderep(&["group", "--group", "Q8", "--save", p, "--print"]);
    let again = gliderep(&["group", "--group", p, "--print"]);
    assert_eq!(stdout(&first), stdout(&again));
    let summary = json(&gliderep(&["group", "--group", p]));
    assert_eq!(summary["order"], 8);
    assert_eq!(summary["abelian"], false);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes_and_structured_errors() {
    assert_eq!(gliderep(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gliderep(&["hasse", "--group", "Q8"]).status.code(), Some(2));
    let o = gliderep(&["hasse", "--group", "Q8", "--chain", "Z2,Z9"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "malformed_spec");
    let o = Command::new(env!("CARGO_BIN_EXE_gliderep"))
        .args(["group", "--group", "Q16"])
        .env("GLIDEREP_ORDER_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "order_bound_exceeded");
}

#[test]
fn pgroup_suite_reports_no_violations() {
    let r = json(&gliderep(&["verify", "--suite", "pgroup-thm", "--max-order", "32"]));
    assert_eq!(r["suite"], "pgroup-thm");
    assert!(r["instances_checked"].as_u64().unwrap() > 0);
    assert_eq!(r["violations"], serde_json::json!([]));
    assert!(r.get("runtime_ms").is_none());
}

#[test]
fn quaternion_pentad_from_the_command_line() {
    let r = json(&gliderep(&[
        "clifford", "pentad", "--group", "Q8", "--square", "Z2,Z4i,Z4j,Q8", "--ambient", "U,T3,T2", "--block", "0,0,1,1",
    ]));
    let mut names: Vec<String> = serde_json::from_value(r["names"].clone()).unwrap();
    names.sort();
    assert_eq!(names, ["Q8", "Q8", "Q8", "Z4i", "Z4j"]);
    assert_eq!(r["h_prime"].as_array().unwrap().len(), 4);
}

#[test]
fn triple_and_decomposability() {
    let r = json(&gliderep(&["nilpotent", "triple", "--group", "C2xC3", "--glider", "0:0,0:1"]));
    assert_eq!((r["a"].as_u64(), r["b"].as_u64(), r["c"].as_u64()), (Some(2), Some(1), Some(2)));
    assert_eq!(r["decomposable"], true);
    assert_eq!(r["round_trip"], true);
    let r = json(&gliderep(&["nilpotent", "triple", "--group", "C2xC3", "--glider", "0:0,1:1"]));
    assert_eq!(r["decomposable"], false);
    let o = gliderep(&["nilpotent", "triple", "--group", "Q8xC3", "--glider", "4:1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn distinguish_quaternion_and_dihedral() {
    let o = gliderep(&["distinguish", "Q8:Z2,Z4i", "D8:Z2,V4a", "--format", "json"]);
    let r = json(&o);
    assert_eq!(r["distinguishable"], true);
    assert_eq!(r["order_four_values"], serde_json::json!([true, false]));
    let o = gliderep(&["glider", "distinguish", "Q8:Z2,Z4i", "Q8:Z2,Z4i"]);
    assert!(stdout(&o).starts_with("indistinguishable"));
}

#[test]
fn glider_build_and_table() {
    let r = json(&gliderep(&["glider", "build", "--group", "Q8", "--chain", "Z2,Z4j", "--ambient", "U", "--gen", "1,0"]));
    assert_eq!(r["irreducible"], true);
    assert_eq!(r["anti_diagonal"], true);
    assert_eq!(r["dimension_vector"], serde_json::json!([1, 1, 2, 2]));
    let r = json(&gliderep(&[
        "glider", "build", "--group", "Q8", "--chain", "Z2,Z4j", "--ambient", "T1^2", "--gen", "1,2",
    ]));
    assert_eq!(r["irreducible"], false);
    let a = gliderep(&["gentable", "--group", "Q8", "--chain", "Z2,Z4j", "--filter", "1,1,1,1"]);
    let b = gliderep(&["glider", "table", "--group", "Q8", "--chain", "Z2,Z4j", "--filter", "1,1,1,1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(csv.starts_with("glider,"));
    assert!(csv.lines().count() > 1);
}
