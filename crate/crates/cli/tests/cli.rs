use std::process::{Command, Output};

use serde_json::Value;

fn facto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facto")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = facto(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), doc)
}

#[test]
fn atoms_listings() {
    let (code, doc) = json_of(&["atoms", r#"{"kind":"block","group":[2,2],"g0":"nonzero"}"#]);
    assert_eq!(code, 0);
    assert_eq!(doc["results"]["count"], 4);
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["tool_version", "spec", "scope", "results", "status"]);

    let (_, doc) = json_of(&["atoms", r#"{"kind":"numerical","generators":[2,3,4]}"#]);
    let atoms: Vec<&Value> = doc["results"]["atoms"].as_array().unwrap().iter().map(|a| &a["atom"]).collect();
    assert_eq!(atoms, [&Value::from(2), &Value::from(3)]);

    let (_, doc) = json_of(&["atoms", r#"{"kind":"power0","max_value":4}"#]);
    let atoms = doc["results"]["atoms"].as_array().unwrap();
    assert!(atoms.iter().any(|a| a["atom"] == serde_json::json!([0, 1])));
}

#[test]
fn element_reports() {
    let c3 = r#"{"kind":"block","group":[3]}"#;
    let (code, doc) = json_of(&["element", c3, "[[[1],3],[[2],3]]", "--what", "lengths"]);
    assert_eq!(code, 0);
    assert_eq!(doc["results"]["lengths"], serde_json::json!([2, 3]));
    assert!(doc["results"].get("catenary").is_none());

    let num = r#"{"kind":"numerical","generators":[2,3]}"#;
    let (_, doc) = json_of(&["element", num, "6", "--what", "catenary,elasticity"]);
    assert_eq!(doc["results"]["catenary"], 3);
    assert_eq!(doc["results"]["elasticity"], serde_json::json!({"num": 3, "den": 2}));

    let (_, doc) = json_of(&["element", num, "0"]);
    assert_eq!(doc["results"]["lengths"], serde_json::json!([0]));
    assert_eq!(doc["results"]["factorizations"].as_array().unwrap().len(), 1);
}

#[test]
fn scan_reports() {
    let (code, doc) = json_of(&["scan", r#"{"kind":"block","group":[3]}"#, "--bound", "9", "--k", "2"]);
    assert_eq!(code, 0);
    assert!(doc["results"]["delta"].as_array().unwrap().contains(&Value::from(1)));
    assert_eq!(doc["results"]["unions"][0]["union"], serde_json::json!([2, 3]));
    assert_eq!(doc["results"]["unions"][0]["exact"], true);

    let (_, doc) = json_of(&["scan", r#"{"kind":"block","group":[2]}"#]);
    assert_eq!(doc["results"]["delta"], serde_json::json!([]));

    let (_, doc) = json_of(&["scan", r#"{"kind":"power0","max_value":8}"#, "--bound", "8", "--no-catenary"]);
    assert!(doc["results"]["delta"].as_array().unwrap().contains(&Value::from(1)));
}

#[test]
fn verify_reports() {
    let (code, doc) = json_of(&["verify", "carlitz", "thm62_atoms"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "PASS");
    let statuses: Vec<&Value> = doc["results"].as_array().unwrap().iter().map(|r| &r["status"]).collect();
    assert_eq!(statuses, ["PASS", "PASS"]);

    let (code, doc) = json_of(&["verify", "primary_uk", "--bound", "6"]);
    assert_eq!(code, 0, "PARTIAL does not fail the process");
    assert_eq!(doc["status"], "PARTIAL");
    assert_eq!(doc["results"][0]["params"]["bound"], 6);

    let (code, _) = json_of(&["verify", "power_delta", "--params", r#"{"power_delta":{"max_value":7}}"#]);
    assert_eq!(code, 1);

    let (_, doc) = json_of(&["list"]);
    assert!(doc["results"].as_array().unwrap().len() >= 15);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| facto(args).status.code();
    assert_eq!(code(&["verify", "no_such_check"]), Some(2));
    assert_eq!(code(&["atoms", r#"{"kind":"bogus"}"#]), Some(2));
    assert_eq!(code(&["atoms", "/nonexistent/spec.json"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["element", r#"{"kind":"numerical","generators":[3,5]}"#, "7"]), Some(3));
    assert_eq!(code(&["element", r#"{"kind":"block","group":[3]}"#, "[[[1],2]]"]), Some(3));
    assert_eq!(code(&["element", r#"{"kind":"power0","max_value":4}"#, "[0,9]"]), Some(4));
    assert_eq!(code(&["atoms", r#"{"kind":"block","group":[101,101]}"#]), Some(4));
}

#[test]
fn table_and_json_carry_the_same_numbers() {
    let spec = r#"{"kind":"numerical","generators":[3,5,7]}"#;
    let table = String::from_utf8(facto(&["scan", spec, "--bound", "30", "--k", "3"]).stdout).unwrap();
    let (_, doc) = json_of(&["scan", spec, "--bound", "30", "--k", "3"]);
    let digits = |s: &str| -> Vec<u64> {
        s.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()).map(|t| t.parse().unwrap()).collect()
    };
    let mut from_table = digits(&table);
    let mut from_json = digits(&serde_json::to_string(&doc["results"]).unwrap());
    from_json.extend(digits(doc["scope"].as_str().unwrap()));
    from_table.sort_unstable();
    from_json.sort_unstable();
    assert_eq!(from_table, from_json);
}

#[test]
fn json_round_trips_byte_identically() {
    let out = facto(&["verify", "rho2k", "uk_interval", "--json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()), text);
}

#[test]
fn spec_from_stdin_and_file() {
    use std::io::Write;
    let spec = r#"{"kind":"numerical","generators":[2,3]}"#;
    let mut child = Command::new(env!("CARGO_BIN_EXE_facto"))
        .args(["atoms", "-", "--json"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(spec.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["results"]["count"], 2);

    let path = std::env::temp_dir().join(format!("facto-spec-{}.json", std::process::id()));
    std::fs::write(&path, spec).unwrap();
    let (code, doc) = json_of(&["atoms", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(doc["spec"]["kind"], "numerical");
}
