use std::fs;
use std::process::{Command, Output};

fn mipf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mipf"))
        .args(args)
        .env_remove("MIPF_TOL")
        .env_remove("MIPF_QORDER")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("mipf-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn clone_check_passes_with_report() {
    let out = mipf(&["clone-check", "--rtilde", "2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["params", "block_count", "multiplicities", "s_residual", "iso_bijection", "s_match_residual", "weights_parent", "weights_target"] {
        assert!(rep.get(key).is_some(), "missing {key}");
    }
    assert_eq!(rep["block_count"], 9);
}

#[test]
fn verify_built_invariant() {
    let out = mipf(&["verify", "--theory", "D2:9", "--builder", "dinv", "--rtilde", "1", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn corrupted_invariant_fails_with_residual() {
    let path = scratch("inv.json");
    let out = mipf(&["build", "--family", "dinv", "--rtilde", "2", "--m", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(mipf(&["verify", "--in", path.to_str().unwrap(), "--tol", "1e-9"]).status.code(), Some(0));

    let mut inv: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    inv["M"][1][2] = serde_json::json!(1);
    let bad = scratch("bad.json");
    fs::write(&bad, inv.to_string()).unwrap();
    let out = mipf(&["verify", "--in", bad.to_str().unwrap(), "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("MS = SM") && err.contains("residual"), "{err}");
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(mipf(&["smatrix", "--theory", "E8:1"]).status.code(), Some(2));
    assert_eq!(mipf(&["smatrix", "--theory", "D2:1"]).status.code(), Some(2));
    assert_eq!(mipf(&["build", "--family", "bseries", "--ltilde", "1", "--m", "3", "--literal-subscripts"]).status.code(), Some(2));
    assert_eq!(mipf(&["extend", "--builder", "scinv", "--theory", "D2:8"]).status.code(), Some(2));
}

#[test]
fn artifacts_are_deterministic() {
    for args in [
        &["search", "--theory", "D2:6"][..],
        &["smatrix", "--theory", "orb:5"],
        &["fusion", "--theory", "D2:7"],
        &["spectrum", "--theory", "u1:3", "--qorder", "6"],
        &["meromorphic", "--m", "3"],
    ] {
        let a = mipf(args);
        let b = mipf(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn zcompare_matches_geometry() {
    for args in [
        &["zcompare", "--theory", "u1:6", "--builder", "sc", "--current", "4", "--qorder", "6"][..],
        &["zcompare", "--theory", "orb:9", "--builder", "dinv", "--rtilde", "1", "--m", "3", "--qorder", "6"],
        &["zcompare", "--theory", "orb:4", "--builder", "diag", "--qorder", "6"],
    ] {
        let out = mipf(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("h_L,h_R,multiplicity\n"));
    }
}

#[test]
fn env_overrides_tolerance() {
    let out = Command::new(env!("CARGO_BIN_EXE_mipf"))
        .args(["verify", "--theory", "D2:9", "--builder", "dinv", "--rtilde", "1", "--m", "3"])
        .env("MIPF_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
