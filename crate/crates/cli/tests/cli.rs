use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qrslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrslab")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn run(config: &str, out: &Path, step: &str) -> Output {
    qrslab(&[step, "--config", config, "--out", out.to_str().unwrap()])
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr: {}", String::from_utf8_lossy(&o.stderr)))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const UNIVERSAL: &str = r#"{"seed": 11,
    "scheme": {"kind": "universal", "rows": 2, "cols": 2, "depth": 4},
    "sampler": {"kind": "exact", "k": 2000},
    "verifiers": [{"name": "xeb_linear", "threshold": 0.0}, {"name": "hog"}, {"name": "tvd"}]}"#;

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), UNIVERSAL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run(&cfg, &a, "generate").status.success());
    assert!(run(&cfg, &b, "generate").status.success());
    let first = std::fs::read(a.join("instance.json")).unwrap();
    assert_eq!(first, std::fs::read(b.join("instance.json")).unwrap());

    let seeded = dir.path().join("c");
    let o = qrslab(&["generate", "--config", &cfg, "--out", seeded.to_str().unwrap(), "--seed", "12"]);
    assert!(o.status.success());
    assert_ne!(first, std::fs::read(seeded.join("instance.json")).unwrap());
}

#[test]
fn universal_grid_structure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), UNIVERSAL);
    assert!(run(&cfg, dir.path(), "generate").status.success());
    let instance = read_json(&dir.path().join("instance.json"));
    assert_eq!(instance["scheme"], "universal");
    let gates = instance["circuit"]["gates"].as_array().unwrap();
    let single = gates.iter().filter(|g| g["targets"].as_array().unwrap().len() == 1).count();
    assert_eq!(single, 16);
    // period-4 coupler cycle on a 2×2 grid: 2 + 0 + 2 + 0 couplers
    assert_eq!(gates.len() - single, 4);
}

#[test]
fn fock_instance_holds_one_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"seed": 2, "scheme": {"kind": "fock_bs", "m": 6, "n": 3}, "sampler": {"kind": "ancestral", "k": 100}}"#,
    );
    assert!(run(&cfg, dir.path(), "generate").status.success());
    let instance = read_json(&dir.path().join("instance.json"));
    assert_eq!(instance["scheme"], "fock_bs");
    assert_eq!(instance["photons"], 3);
    let unitary = &instance["unitary"];
    assert_eq!(unitary["rows"], 6);
    assert_eq!(unitary["cols"], 6);
}

#[test]
fn ideal_pipeline_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), UNIVERSAL);
    for step in ["generate", "sample"] {
        let o = run(&cfg, dir.path(), step);
        assert!(o.status.success(), "{step}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let samples = std::fs::read_to_string(dir.path().join("samples.jsonl")).unwrap();
    let header: Value = serde_json::from_str(samples.lines().next().unwrap()).unwrap();
    assert_eq!(header["k"], 2000);
    assert_eq!(header["sampler"], "exact");
    assert_eq!(header["seed"], 11);
    assert_eq!(samples.lines().count(), 2001);

    let o = run(&cfg, dir.path(), "verify");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports = read_json(&dir.path().join("reports.json"));
    assert_eq!(reports.as_array().unwrap().len(), 3);
    for r in reports.as_array().unwrap() {
        for field in ["metric", "estimate", "stderr", "k", "aux"] {
            assert!(r.get(field).is_some(), "{field} missing");
        }
    }
    let record = read_json(&dir.path().join("run_record.json"));
    assert_eq!(record["passed"], true);

    let o = qrslab(&["report", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("xeb_linear") && text.contains("pass"));
}

#[test]
fn uniform_samples_fail_hog_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"seed": 4, "scheme": {"kind": "universal", "rows": 2, "cols": 3, "depth": 12},
            "sampler": {"kind": "uniform", "k": 5000},
            "verifiers": [{"name": "hog", "threshold": 0.5}]}"#,
    );
    for step in ["generate", "sample"] {
        assert!(run(&cfg, dir.path(), step).status.success());
    }
    let o = run(&cfg, dir.path(), "verify");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(read_json(&dir.path().join("run_record.json"))["passed"], false);
}

#[test]
fn invalid_config_exits_2_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"seed": 1, "scheme": {"kind": "iqp_poly", "n": 4}, "sampler": {"kind": "exact", "k": 0}}"#,
    );
    let o = run(&cfg, dir.path(), "generate");
    assert_eq!(o.status.code(), Some(2));
    let err = stderr_json(&o);
    assert_eq!(err["error"], "config");
    assert_eq!(err["exit_code"], 2);

    let o = qrslab(&["generate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");

    let o = qrslab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");
}

#[test]
fn verifier_scheme_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"seed": 1, "scheme": {"kind": "iqp_poly", "n": 4}, "sampler": {"kind": "exact", "k": 10},
            "verifiers": [{"name": "row_norm"}]}"#,
    );
    assert_eq!(run(&cfg, dir.path(), "verify").status.code(), Some(2));
}

#[test]
fn missing_artifacts_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), UNIVERSAL);
    let o = run(&cfg, dir.path(), "sample");
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "missing_artifact");
    assert!(run(&cfg, dir.path(), "generate").status.success());
    assert_eq!(run(&cfg, dir.path(), "verify").status.code(), Some(3));
    assert_eq!(qrslab(&["report", "--out", dir.path().to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn noisy_and_bosonic_schemes_run() {
    let configs = [
        r#"{"seed": 5, "scheme": {"kind": "iqp_weights", "n": 5}, "sampler": {"kind": "metropolis", "burn_in": 100, "thinning": 2, "k": 500},
            "noise": {"kind": "pauli", "eps": 0.05, "n_traj": 64}, "verifiers": [{"name": "xeb_linear"}, {"name": "bog", "bins": 4}]}"#,
        r#"{"seed": 6, "scheme": {"kind": "iqp_poly", "n": 5}, "sampler": {"kind": "frugal", "c": 2, "k": 500},
            "noise": {"kind": "white", "lambda": 0.3}, "verifiers": [{"name": "hog"}, {"name": "bayes"}]}"#,
        r#"{"seed": 7, "scheme": {"kind": "fock_bs", "m": 8, "n": 2}, "sampler": {"kind": "ancestral", "k": 500},
            "verifiers": [{"name": "row_norm"}, {"name": "tvd", "threshold": 0.2}, {"name": "bayes", "threshold": 0.5}]}"#,
        r#"{"seed": 8, "scheme": {"kind": "gaussian_bs", "m": 3, "r": 0.4, "cutoff": 4}, "sampler": {"kind": "rejection", "c": 40, "k": 300},
            "verifiers": [{"name": "tvd"}, {"name": "spoof_guard_is_not_a_verifier"}]}"#,
    ];
    for (i, text) in configs.iter().enumerate() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(dir.path(), text);
        if i == 3 {
            // unknown verifier names are config errors
            assert_eq!(run(&cfg, dir.path(), "generate").status.code(), Some(2));
            let fixed = text.replace(r#", {"name": "spoof_guard_is_not_a_verifier"}"#, "");
            let cfg = write_config(dir.path(), &fixed);
            for step in ["generate", "sample", "verify"] {
                let o = run(&cfg, dir.path(), step);
                assert_eq!(o.status.code(), Some(0), "{step}: {}", String::from_utf8_lossy(&o.stderr));
            }
            continue;
        }
        for step in ["generate", "sample", "verify"] {
            let o = run(&cfg, dir.path(), step);
            assert_eq!(o.status.code(), Some(0), "config {i} {step}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
}

#[test]
fn oracle_registry() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = qrslab(&["oracle", "--list"]);
    assert!(o.status.success());
    let list: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(list.as_array().unwrap().iter().any(|f| f["name"] == "tmss"));

    let o = qrslab(&["oracle", "tmss", "--out", out]);
    assert!(o.status.success());
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    let doc = read_json(&dir.path().join("oracle/tmss.json"));
    assert_eq!(doc["sha256"], summary["sha256"]);

    let o = qrslab(&["oracle", "no_such_fixture", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_probability_sample_is_a_data_error() {
    // IQP tables have exact zeros; white noise puts samples on them and the
    // cross entropy diverges
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"seed": 6, "scheme": {"kind": "iqp_poly", "n": 5}, "sampler": {"kind": "exact", "k": 500},
            "noise": {"kind": "white", "lambda": 0.5}, "verifiers": [{"name": "cross_entropy"}]}"#,
    );
    for step in ["generate", "sample"] {
        assert!(run(&cfg, dir.path(), step).status.success());
    }
    let o = run(&cfg, dir.path(), "verify");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "data");
}
