use std::process::{Command, Output};

fn hermform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermform"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn three_squares_first_exception() {
    let o = hermform(&["check", "x^2+y^2+z^2", "--limit", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first exception 7"));
}

#[test]
fn filtered_check_passes() {
    // 7 ≡ 7 (mod 8) is the only kind of miss for three squares below 20
    let o = hermform(&[
        "check", "x^2+y^2+z^2", "--limit", "20", "--modulus", "8", "--residues", "1,2,3,5,6",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn selector_check_passes() {
    let o = hermform(&["check", "23:2", "--limit", "300"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_are_usage_errors() {
    let o = hermform(&["represent", "x^2+q^2", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown variable 'q'"));
    assert_eq!(hermform(&["prove", "f99", "3"]).status.code(), Some(2));
    assert_eq!(hermform(&["transfer", "4:1"]).status.code(), Some(2));
    assert_eq!(hermform(&["verify"]).status.code(), Some(2));
    assert_eq!(hermform(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn represent_reports_witness_or_absence() {
    let o = hermform(&["represent", "x^2+y^2", "25"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(-5, 0)"));
    assert_eq!(hermform(&["represent", "x^2+y^2", "3"]).status.code(), Some(1));
}

#[test]
fn prove_prints_replayed_trace() {
    let o = hermform(&["prove", "f23", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("case f23"));
    assert!(out.contains("replay:"));
    assert!(out.contains("= 1000"));

    let o = hermform(&["prove", "f11", "11"]);
    assert!(stdout(&o).contains("scale by 11"));
}

#[test]
fn transfer_shows_printed_match() {
    let o = hermform(&["transfer", "7:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("matches f7,2"));
}

#[test]
fn verify_single_case() {
    let o = hermform(&["verify", "f15", "--limit", "300", "--genus-limit", "600"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("1/1 lattices verified"));
}

#[test]
fn corrupted_catalog_fails_with_first_exception() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(
        &path,
        "m=1; blocks=U(1),U(1); label=<1,1>\nm=1; blocks=U(1),U(4); label=<1,4>\n",
    )
    .unwrap();
    let json = dir.path().join("r.json");
    let o = hermform(&[
        "--catalog",
        path.to_str().unwrap(),
        "verify",
        "--all",
        "--limit",
        "100",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first exception 3"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["lattices"][1]["first_exception"], 3);
    assert!(v["lattices"][1]["case"].is_null());
}

fn report(dir: &std::path::Path, name: &str) -> serde_json::Value {
    let path = dir.join(name);
    let o = hermform(&[
        "verify",
        "--all",
        "--limit",
        "200",
        "--genus-limit",
        "400",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    hermform::report::strip_timing(&mut v);
    v
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = report(dir.path(), "a.json");
    let b = report(dir.path(), "b.json");
    assert_eq!(a, b);
    assert_eq!(a["schema"], 1);
    assert_eq!(a["passed_lattices"], 25);
    let printed = a["printed_substitutions"].as_array().unwrap();
    let f15 = printed.iter().find(|p| p["case"] == "f15").unwrap();
    assert_eq!(f15["holds"], true);
    for case in ["f23", "f31"] {
        let p = printed.iter().find(|p| p["case"] == case).unwrap();
        assert_eq!(p["holds"], false);
        assert!(p["used"].is_array());
    }
}
