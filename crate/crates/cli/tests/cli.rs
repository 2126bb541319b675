use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordan-spectra")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn pentagon_is_not_spectral_and_its_witness_rechecks() {
    let o = run(&["check", "--property", "spectral", &fixture("pentagon.json")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "check");
    assert_eq!(v["spectral"], false);
    assert_eq!(v["witness"]["kind"], "uncovered_point");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let r = run(&["recheck", &fixture("pentagon.json"), "--witness", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(json(&r)["all_valid"], true);
}

#[test]
fn spectral_exit_codes() {
    for f in ["square.json", "hexagon.json"] {
        assert_eq!(run(&["check", "--property", "spectral", &fixture(f)]).status.code(), Some(1), "{f}");
    }
    for f in ["simplex3.json", "ball3.json", "herm_c3.json"] {
        let o = run(&["check", "--property", "spectral", &fixture(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        assert_eq!(json(&o)["spectral"], true);
    }
}

#[test]
fn square_strong_symmetry_witness_rechecks() {
    let o = run(&["check", "--property", "strong-symmetry", "fixture:square"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["witness"]["kind"], "inequivalent_frames");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let r = run(&["recheck", "fixture:square", "--witness", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    // two adjacent pairs are related by a rotation, so this is no witness
    let tampered = r#"{"kind":"inequivalent_frames","a":[0,1],"b":[1,2]}"#;
    std::fs::write(&path, tampered).unwrap();
    let r = run(&["recheck", "fixture:square", "--witness", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(json(&r)["all_valid"], false);
}

#[test]
fn verify_theorem_sym_r_3() {
    let o = run(&["verify-theorem", "--eja", "sym_r", "--m", "3", "--trials", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["trials"], 100);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn verify_theorem_simplex_and_converse() {
    let o = run(&["verify-theorem", "--simplex", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify-theorem", "--converse"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["all_agree"], true);
}

#[test]
fn tables_eiv() {
    let o = run(&["tables", "--type", "EIV"]);
    assert_eq!(o.status.code(), Some(0));
    let e = &json(&o)["evaluated"];
    assert_eq!(e["rank"], 2);
    assert_eq!(e["root_space"], "A_2");
    assert_eq!(e["eja"]["algebra"]["name"], "Herm(3,O)");
    assert_eq!(e["eja"]["algebra"]["dim"], 27);
}

#[test]
fn tables_parameters_and_consistency() {
    let o = run(&["tables", "--type", "AI", "--param", "n=4"]);
    assert_eq!(o.status.code(), Some(0));
    let e = &json(&o)["evaluated"];
    assert_eq!(e["rank"], 3);
    assert_eq!(e["eja"]["algebra"]["name"], "Sym(4,R)");
    let o = run(&["tables", "--consistency"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
    assert_eq!(run(&["tables", "--type", "XYZ"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "--type", "AI", "--param", "n"]).status.code(), Some(2));
}

#[test]
fn fr_polytope_exit_codes() {
    let o = run(&["fr-polytope", "fixture:octahedron"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["sss"], false);
    let o = run(&["fr-polytope", "fixture:simplex3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["vertices"], 4);
    assert_eq!(v["symmetry"]["order"], 24);
    let o = run(&["fr-polytope", "--eja", "herm_c", "--m", "3", "--samples", "300"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["symmetry"]["order"], 6);
}

#[test]
fn reruns_are_byte_identical() {
    let cases: [&[&str]; 4] = [
        &["decompose", "--eja", "herm_h", "--m", "3", "--seed", "11"],
        &["verify-theorem", "--eja", "spin", "--n", "4", "--trials", "20", "--seed", "3"],
        &["plot-data", "--eja", "herm_c", "--m", "3", "--points", "16", "--seed", "5"],
        &["check", "--property", "spectral", "fixture:pentagon"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let mut seq = args.to_vec();
        seq.push("--sequential");
        assert_eq!(a.stdout, run(&seq).stdout, "sequential {args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["check", "--property", "rank", "--eja", "herm_o", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rank"], 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["check", "--property", "spectral"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--property", "spectral", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--eja", "sym_r"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "fixture:square", "--point", "3,3"]).status.code(), Some(2));
    assert_eq!(run(&["frames", "--k", "4", "--eja", "spin", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn decompose_polytope_and_ball() {
    let o = run(&["decompose", "fixture:simplex2", "--point", "1/3,1/3,1/3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["weights"], serde_json::json!(["1/3", "1/3", "1/3"]));
    let o = run(&["decompose", &fixture("ball3.json"), "--point", "0.6,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let w = json(&o)["weights"].clone();
    assert!((w[0].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((w[1].as_f64().unwrap() - 0.2).abs() < 1e-12);
}
