use std::process::{Command, Output};

use serde_json::Value;

fn afpotts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afpotts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn enumerate_prints_canonical_csv() {
    let out = afpotts(&["polygons", "enumerate", "--lmax", "14"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<String> = text
        .lines()
        .map(|l| l.split(',').take(2).collect::<Vec<_>>().join(","))
        .collect();
    assert!(rows.iter().any(|r| r == "6,1"));
    assert!(rows.iter().any(|r| r == "10,6"));
}

#[test]
fn strong_bound_from_published_prefix() {
    let v = json(&afpotts(&[
        "bound",
        "zero-temp",
        "--published-prefix",
        "--form",
        "strong",
        "--tail-from",
        "142",
    ]));
    assert_eq!(v["schema_version"], 1);
    let m: f64 = v["result"]["magnetization_lower_decimal_down"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(m >= 0.90301, "{m}");
}

#[test]
fn exact_star_marginal_and_seed_echo() {
    let v = json(&afpotts(&[
        "--seed",
        "7",
        "exact",
        "events",
        "--region",
        "star",
        "--event",
        "color:0:1",
        "--betas",
        "inf",
    ]));
    assert_eq!(v["seed"], 7);
    assert_eq!(
        v["result"]["events"][0]["probability"]["at_infinity"],
        "32/33"
    );
}

#[test]
fn validation_failures_exit_one() {
    assert_eq!(
        afpotts(&["lattice", "build", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(
        afpotts(&["exact", "measure", "--region", "ball:3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        afpotts(&[
            "exact",
            "events",
            "--region",
            "star",
            "--event",
            "color:0:4"
        ])
        .status
        .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"beta": "2", "colour": 1}"#).unwrap();
    let out = afpotts(&[
        "--config",
        cfg.to_str().unwrap(),
        "bound",
        "tail",
        "--from",
        "24",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn simulation_from_config_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{
            "region": {"kind": "ball", "radius": 2},
            "beta": "3",
            "seed": 11,
            "schedule": {"sweeps": 3000, "thermalization": 300, "metropolis_per_wsk": 1, "chains": 2},
            "observables": [{"kind": "marginal", "vertex": 0, "color": 1}, {"kind": "percolation", "vertex": 0}]
        }"#,
    )
    .unwrap();
    let out_a = dir.path().join("a.json");
    let a = afpotts(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap(),
        "simulate",
        "run",
    ]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = json(&afpotts(&[
        "--config",
        cfg.to_str().unwrap(),
        "simulate",
        "run",
    ]));
    let a: Value = serde_json::from_str(&std::fs::read_to_string(out_a).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(b["seed"], 11);
    let p = b["result"]["estimates"][0]["mean"].as_f64().unwrap();
    assert!(p > 0.8, "{p}");
}

#[test]
fn verify_subset_passes() {
    let out = afpotts(&["verify", "all", "--level", "desk", "--only", "2,3,5"]);
    let v = json(&out);
    let results = v["result"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert!(results.iter().all(|r| r["passed"] == true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS  2"));
}

#[test]
fn contour_check_splits_star_colouring() {
    let v = json(&afpotts(&["contour", "check", "--region", "star", "--colors", "2,1,3,1,3,1,3"]));
    assert_eq!(v["result"]["unsatisfied_g0"].as_array().unwrap().len(), 6);
    assert_eq!(v["result"]["unsatisfied_g1"].as_array().unwrap().len(), 6);
    let quiet = json(&afpotts(&["contour", "check", "--region", "star", "--colors", "1,2,2,2,2,2,2"]));
    assert!(quiet["result"]["unsatisfied_g1"].as_array().unwrap().is_empty());
}
