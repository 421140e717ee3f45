use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chartctl::*;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chartctl"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chartctl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn construct_p2_emits_degree_eight_chart() {
    let out = run(&["construct", "p2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "chart");
    assert_eq!(v["chart"]["claimed_degree"], 8);
    assert_eq!(v["base_points"]["outcome"], "certified");
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn construct_records_seed() {
    let v = json(&run(&["construct", "pn", "--n", "3", "--seed", "7", "--json"]));
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["chart"]["seed"], 7);
    assert_eq!(v["chart"]["claimed_degree"], 48);
}

#[test]
fn construct_bundle_has_two_charts() {
    let v = json(&run(&["construct", "bundle", "--n", "1", "--degrees", "0,2", "--json"]));
    assert_eq!(v["kind"], "atlas");
    assert_eq!(v["atlas"]["charts"].as_array().unwrap().len(), 2);
}

#[test]
fn construct_is_reproducible() {
    let a = run(&["construct", "pn", "--n", "2", "--seed", "3", "--json"]);
    let b = run(&["construct", "pn", "--n", "2", "--seed", "3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_p2_and_brute_backend() {
    let p2 = scratch("p2.json");
    assert!(run(&["construct", "p2", "--out", p2.to_str().unwrap()]).status.success());
    let out = run(&["verify", p2.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let degree = v["suites"].as_array().unwrap().iter().find(|s| s["name"] == "degree").unwrap();
    assert_eq!(degree["detail"]["inferred_degree"], 8);

    let p1n = scratch("p1n2.json");
    assert!(run(&["construct", "p1n", "--n", "2", "--out", p1n.to_str().unwrap()]).status.success());
    let out = run(&["verify", p1n.to_str().unwrap(), "--backend", "brute", "--p", "11", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let agree = v["suites"].as_array().unwrap().iter().find(|s| s["name"] == "backend_agreement").unwrap();
    assert_eq!(agree["detail"]["agreeing"], 144);
    assert_eq!(agree["detail"]["targets"], 144);
}

#[test]
fn verify_exact_backend() {
    let path = scratch("p1n2-exact.json");
    assert!(run(&["construct", "p1n", "--n", "2", "--out", path.to_str().unwrap()]).status.success());
    let out = run(&["verify", path.to_str().unwrap(), "--backend", "exact", "--p", "103"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn obstruct_examples() {
    let v = json(&run(&["obstruct", "--curve", "x^3+y^3+z^3", "--json"]));
    assert_eq!(v["verdict"]["outcome"], "OBSTRUCTED");
    let v = json(&run(&["obstruct", "--curve", "x*z-y^2", "--json"]));
    assert_eq!(v["verdict"]["outcome"], "INCONCLUSIVE");
    let out = run(&["obstruct", "--surface", &fixture("p1xp1_one_ruling.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["outcome"], "OBSTRUCTED");
    assert_eq!(v["verdict"]["reason"], "TOO_FEW_COMPONENTS");
    let v = json(&run(&["obstruct", "--surface", &fixture("p2_minus_cubic_and_line.json"), "--json"]));
    assert_eq!(v["verdict"]["reason"], "NON_RATIONAL_BOUNDARY");
    let v = json(&run(&["obstruct", "--curve-file", &fixture("fermat_cubic.json"), "--json"]));
    assert_eq!(v["verdict"]["reason"], "POSITIVE_GENUS_AMPLE_CURVE");
    let v = json(&run(&["obstruct", "--catalog", "--json"]));
    assert!(v.as_array().unwrap().len() >= 20);
}

#[test]
fn erratum_rows() {
    let v = json(&run(&["erratum", "--n", "2", "--json"]));
    let rows = v["rows"].as_array().unwrap();
    let product = rows.iter().find(|r| r["family"] == "(P^1)^n").unwrap();
    assert_eq!((product["stated_value"].as_u64(), product["measured"].as_u64()), (Some(2), Some(4)));
    let proj = rows.iter().find(|r| r["family"] == "P^n").unwrap();
    assert_eq!((proj["stated_value"].as_u64(), proj["measured"].as_u64()), (Some(4), Some(8)));
    let v = json(&run(&["erratum", "--n", "1", "--json"]));
    assert_eq!(v["rows"][0]["stated_value"], 1);
    assert_eq!(v["rows"][0]["measured"], 2);
}

#[test]
fn exit_code_contract() {
    assert_eq!(run(&["construct", "pn"]).status.code(), Some(3));
    assert_eq!(run(&["construct", "pn", "--n", "5"]).status.code(), Some(3));
    assert_eq!(run(&["construct", "bundle", "--n", "1"]).status.code(), Some(3));
    assert_eq!(run(&["construct", "nonsense"]).status.code(), Some(3));
    assert_eq!(run(&["obstruct", "--curve", "x^2 + y"]).status.code(), Some(3));
    assert_eq!(run(&["obstruct"]).status.code(), Some(3));
    assert_eq!(run(&["erratum", "--n", "4"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "{\"kind\": \"chart\"}").unwrap();
    assert_eq!(run(&["verify", garbage.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(run(&["verify", "/nonexistent/chart.json"]).status.code(), Some(3));
    let out = bin().args(["erratum", "--n", "1"]).env("PSEUDOCHART_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bin().args(["erratum", "--n", "1"]).env("PSEUDOCHART_THREADS", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn center_meeting_the_variety_maps_to_exit_four() {
    let err = CliError::from(pseudochart::atlasbuild::AtlasError::CenterMeetsVariety { attempts: 8, detail: "x".into() });
    assert_eq!(err.exit, Exit::CenterMeetsVariety);
    assert_eq!(Exit::CenterMeetsVariety as u8, 4);
}

#[test]
fn budget_maps_to_exit_five() {
    let err = CliError::from(pseudochart::chartverify::VerifyError::Budget("cap".into()));
    assert_eq!(err.exit, Exit::Budget);
    assert!(err.to_string().starts_with("INCONCLUSIVE_BUDGET"));
}

/// construct → serialize → parse → verify matches construct → verify.
#[test]
fn round_trip_verification_is_byte_identical() {
    let cases: [(&str, Option<usize>, Option<Vec<i64>>); 8] = [
        ("p1", None, None),
        ("p1n", Some(1), None),
        ("p1n", Some(2), None),
        ("p1n", Some(3), None),
        ("p2", None, None),
        ("pn", Some(2), None),
        ("bundle", Some(1), Some(vec![0, 2])),
        ("bundle", Some(2), Some(vec![0, 0, 1])),
    ];
    for (kind, n, degrees) in cases {
        let mut c = RunConfig::new("construct", 4);
        c.construction = Some(kind.into());
        c.n = n;
        c.degrees = degrees;
        let doc = construct(&c).unwrap();
        let parsed = Document::parse(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(parsed, doc);
        let mut vc = RunConfig::new("verify", 9);
        vc.samples = Some(12);
        let a = serde_json::to_string(&verify(&doc, &vc).unwrap()).unwrap();
        let b = serde_json::to_string(&verify(&parsed, &vc).unwrap()).unwrap();
        assert_eq!(a, b, "{kind}");
        let report: VerifyReport = serde_json::from_str(&a).unwrap();
        assert_eq!(report.exit(), Exit::Ok, "{kind}: {a}");
    }
}
