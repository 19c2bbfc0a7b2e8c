use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sofic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sofic")).args(args).output().expect("binary runs")
}

fn requests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../requests")
}

fn construct(request: &Path, seed: u64, out: &Path) -> Output {
    sofic(&["construct", "--request", request.to_str().unwrap(), "--seed", &seed.to_string(), "--out", out.to_str().unwrap()])
}

#[test]
fn verify_regular_z4() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("z4.json");
    assert!(construct(&requests_dir().join("regular_z4.json"), 0, &cert).status.success());
    let out = sofic(&["verify", "--qa", cert.to_str().unwrap(), "--epsilon", "1/100"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("max defect 0/4"));
}

#[test]
fn verification_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("ext.json");
    assert!(construct(&requests_dir().join("extension_z_times_z2.json"), 0, &cert).status.success());
    // Two fixpoints out of 40 break condition (c) at 1/100.
    let out = sofic(&["verify", "--qa", cert.to_str().unwrap(), "--epsilon", "1/100"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decimal_epsilon_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("z4.json");
    assert!(construct(&requests_dir().join("regular_z4.json"), 0, &cert).status.success());
    let out = sofic(&["verify", "--qa", cert.to_str().unwrap(), "--epsilon", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p/q"));
}

#[test]
fn unreachable_order_cap_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v.json");
    let out = sofic(&["girth-search", "--labels", "4", "--bound", "8", "--order-cap", "10", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("order cap"));
    assert!(!out_path.exists());
}

#[test]
fn malformed_request_names_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let req = dir.path().join("bad.json");
    fs::write(&req, r#"{"construct": "regular", "group": {"cyclic": 4}}"#).unwrap();
    let out = construct(&req, 0, &dir.path().join("out.json"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon"));
}

#[test]
fn girth_search_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v.json");
    let out = sofic(&["girth-search", "--labels", "4", "--bound", "4", "--order-cap", "5000", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let w: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    for key in ["degree", "generators", "order", "girth_bound", "seed"] {
        assert!(w.get(key).is_some(), "missing {key}");
    }
    assert_eq!(w["generators"].as_array().unwrap().len(), 4);
}

#[test]
fn inputs_are_not_modified() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("p.json");
    assert!(construct(&requests_dir().join("product_z2_z3.json"), 0, &cert).status.success());
    let before = fs::read(&cert).unwrap();
    assert!(sofic(&["verify", "--qa", cert.to_str().unwrap(), "--strict"]).status.code().is_some());
    assert_eq!(fs::read(&cert).unwrap(), before);
}

/// Every request, constructed twice with the same seed, gives byte-identical output.
#[test]
fn double_run_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut requests: Vec<PathBuf> = fs::read_dir(requests_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    requests.sort();
    assert!(!requests.is_empty());
    for req in requests {
        let name = req.file_name().unwrap().to_str().unwrap().to_string();
        let first = dir.path().join(format!("1-{name}"));
        let second = dir.path().join(format!("2-{name}"));
        let a = construct(&req, 42, &first);
        let b = construct(&req, 42, &second);
        assert_eq!(a.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(b.status.code(), Some(0), "{name}");
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap(), "{name} differs between runs");
        if !name.starts_with("girth") {
            // The emitted certificate re-verifies with the same status.
            let v = sofic(&["verify", "--qa", first.to_str().unwrap()]);
            assert_eq!(v.status.code(), Some(0), "{name}");
        }
    }
}
