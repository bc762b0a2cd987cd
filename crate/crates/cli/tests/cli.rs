use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mahler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(args)
        .env_remove("MAHLER_DEPTH_MAX")
        .env_remove("MAHLER_DEG_MAX")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn corpus_file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

const THUE_MORSE: &str = r#"{"k":2,"coeffs":[["1"],["-1","1"]]}"#;
const PARTITIONS: &str = r#"[["1","-1"],["-1"]]"#;
const WORKED: &str = r#"{"k":2,"coeffs":[["1","1"],["-1"]]}"#;

#[test]
fn solve_thue_morse() {
    let v = json_of(&mahler(&["solve", "--k", "2", "--order", "8", THUE_MORSE]));
    let coeffs: Vec<&str> = v["basis"][0]["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["1", "-1", "-1", "1", "-1", "1", "1", "-1"]);
}

#[test]
fn certify_partitions() {
    let v = json_of(&mahler(&["certify", "--k", "2", "--order", "64", PARTITIONS]));
    assert_eq!(v["verdict"], "NOT_REGULAR");
    assert_eq!(v["criterion"], "fixed_unity_zero");
    assert_eq!(v["M"], 1);
}

#[test]
fn certify_inconclusive_is_success() {
    let v = json_of(&mahler(&["certify", r#"{"k":2,"coeffs":[["2","-1"],["-2"]]}"#]));
    assert_eq!(v["verdict"], "INCONCLUSIVE");
}

#[test]
fn normalize_worked_example() {
    let v = json_of(&mahler(&["normalize", "--k", "2", WORKED]));
    assert_eq!(v["Q"], serde_json::json!(["1", "-1"]));
    assert_eq!(v["gamma"], 0);
    let text = mahler(&["normalize", "--format", "text", WORKED]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("Q = 1 - z"));
}

#[test]
fn pipelines() {
    let t = json_of(&mahler(&["pipeline", THUE_MORSE]));
    assert_eq!(t["normalization"]["Q"], serde_json::json!(["1"]));
    assert_eq!(t["becker"]["source"], "normalized equation");
    assert_eq!(t["certificate"]["verdict"], "REGULAR");

    let w = json_of(&mahler(&["pipeline", WORKED]));
    assert_eq!(w["normalization"]["Q"], serde_json::json!(["1", "-1"]));
    assert_eq!(w["witness"]["coeffs"][0], serde_json::json!(["1", "1"]));
    assert_eq!(w["certificate"]["verdict"], "REGULAR");

    let fam = json_of(&mahler(&["pipeline", &corpus_file("family_k2")]));
    assert_eq!(fam["normalization"]["gamma"], 3);
    assert_eq!(fam["becker_check"]["holds"], true);
    assert_eq!(fam["certificate"]["verdict"], "REGULAR");
}

#[test]
fn becker_search_on_the_family_control() {
    let f0 = json_of(&mahler(&["corpus", "emit", "family_k2"]));
    // F(z)/z from the stored prefix of F
    let mut series = f0["prefix"].clone();
    series["valuation"] = Value::from(-1);
    series["order"] = Value::from(series["order"].as_i64().unwrap() - 1);
    let v = json_of(&mahler(&["becker-search", "--k", "2", &series.to_string()]));
    assert_eq!(v["status"], "found");
    assert_eq!(v["depth"], 2);
}

#[test]
fn representations() {
    let rep = r#"{"k":2,"dim":1,"row":["1"],"matrices":[[["1"]],[["-1"]]],"col":["1"]}"#;
    let v = json_of(&mahler(&["rep-eval", "--count", "8", rep]));
    assert_eq!(v["values"], serde_json::json!(["1", "-1", "-1", "1", "-1", "1", "1", "-1"]));
    let eq = json_of(&mahler(&["eq-from-rep", rep]));
    assert_eq!(eq, serde_json::from_str::<Value>(THUE_MORSE).unwrap());
    let closure = json_of(&mahler(&["rep-from-eq", THUE_MORSE]));
    assert_eq!(closure["closure"]["status"], "found");
    assert_eq!(closure["closure"]["rep"]["dim"], 1);
}

#[test]
fn other_subcommands() {
    let tm = r#"["1","-1","-1","1","-1","1","1","-1","-1","1","1","-1","1","-1","-1","1"]"#;
    let v = json_of(&mahler(&["verify", THUE_MORSE, "--series", tm]));
    assert_eq!(v["holds"], true);
    let c = json_of(&mahler(&["cartier", "--k", "2", "--digit", "1", tm]));
    assert_eq!(c["sections"][0]["series"]["coeffs"][0], "-1");
    let p = json_of(&mahler(&["pole-profile", PARTITIONS, "--k", "2"]));
    assert_eq!(p["profile"], serde_json::json!([1, 2, 3, 4, 5, 6]));
    let d = json_of(&mahler(&["decompose", "--k", "2", PARTITIONS, "--order", "32"]));
    assert_eq!(d["decomposition"]["Gamma"], serde_json::json!(["1", "-1"]));
    let w = json_of(&mahler(&["witness", WORKED]));
    assert!(w["witness"].is_object());
    let g = json_of(&mahler(&["guess", "--k", "2", &corpus_file("stern")]));
    assert_eq!(g["equation"]["coeffs"][1], serde_json::json!(["-1", "-1", "-1"]));
}

#[test]
fn corpus_list_and_check() {
    let v = json_of(&mahler(&["corpus", "list"]));
    assert_eq!(v["items"].as_array().unwrap().len(), 5);
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus");
    let v = json_of(&mahler(&["corpus", "check", "--dir", dir.to_str().unwrap()]));
    assert_eq!(v["mismatches"], serde_json::json!([]));
}

#[test]
fn json_output_is_deterministic() {
    let a = mahler(&["pipeline", WORKED]);
    let b = mahler(&["pipeline", WORKED]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn roundtrip_of_canonical_files() {
    let v = json_of(&mahler(&["roundtrip", &corpus_file("thue_morse"), &corpus_file("stern")]));
    assert!(v["files"].as_array().unwrap().iter().all(|f| f["status"] == "canonical"));
}

#[test]
fn roundtrip_flags_problems() {
    let dir = std::env::temp_dir().join(format!("mahler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let loose = dir.join("loose.json");
    std::fs::write(&loose, THUE_MORSE).unwrap();
    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{\n  \"k\": 2,\n  \"coeffs\": [").unwrap();
    let canon = dir.join("canon.json");
    let eq = mahler(&["solve", "--order", "4", THUE_MORSE]);
    assert!(eq.status.success());
    let rep = mahler(&["eq-from-rep", r#"{"k":2,"dim":1,"row":["1"],"matrices":[[["1"]],[["-1"]]],"col":["1"]}"#]);
    std::fs::write(&canon, &rep.stdout).unwrap();

    let out = mahler(&["roundtrip", canon.to_str().unwrap(), loose.to_str().unwrap(), broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["files"][0]["status"], "canonical");
    assert_eq!(v["files"][0]["schema"], "equation");
    assert_eq!(v["files"][1]["status"], "non_canonical");
    assert_eq!(v["files"][1]["line"], 1);
    assert_eq!(v["files"][2]["status"], "malformed");
    assert!(v["files"][2]["message"].as_str().unwrap().contains("line 3"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(mahler(&[]).status.code(), Some(2));
    assert_eq!(mahler(&["solve", "--order", "x", THUE_MORSE]).status.code(), Some(2));
    assert_eq!(mahler(&["solve", PARTITIONS]).status.code(), Some(2));
    assert_eq!(mahler(&["solve", "--k", "3", THUE_MORSE]).status.code(), Some(2));
    assert_eq!(mahler(&["solve", "/nonexistent/eq.json"]).status.code(), Some(2));
    assert_eq!(mahler(&["solve", r#"{"k":2,"#]).status.code(), Some(3));
    assert_eq!(mahler(&["solve", r#"{"k":1,"coeffs":[["1"],["1"]]}"#]).status.code(), Some(3));
    assert_eq!(mahler(&["solve", r#"{"k":2,"coeffs":[["1"],["x"]]}"#]).status.code(), Some(3));
    assert_eq!(mahler(&["corpus", "emit", "nope"]).status.code(), Some(2));
}

#[test]
fn text_format() {
    let out = mahler(&["certify", "--format", "text", "--k", "2", PARTITIONS]);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.starts_with("verdict: NOT_REGULAR"), "{s}");
    let out = mahler(&["pipeline", "--format", "text", THUE_MORSE]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: REGULAR"));
}

#[test]
fn bounds_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(["becker-search", "--k", "2", &corpus_file("stern")])
        .env("MAHLER_DEPTH_MAX", "1")
        .env("MAHLER_DEG_MAX", "1")
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["status"], "inconclusive");
    assert!(v["reason"].as_str().unwrap().contains("depth <= 1 and degree <= 1"));
}
