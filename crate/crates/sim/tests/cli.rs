use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_tsallis-inf");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("TSALLIS_THREADS")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = r#"{
    "environment": {"type": "experiment1", "arms": 2, "gap": 0.25},
    "algorithms": [{"type": "tsallis", "estimator": "rv"}, {"type": "exp3"}],
    "horizon": 300,
    "repetitions": 3
}"#;

#[test]
fn run_writes_named_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp1.json", SMALL);
    let out = dir.path().join("out");
    let o = run(&[
        "run",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let raw = std::fs::read_to_string(out.join("exp1_regret.csv")).unwrap();
    assert_eq!(
        raw.lines().next(),
        Some("algorithm,env,seed,t,pseudo_regret")
    );
    let agg = std::fs::read_to_string(out.join("exp1_aggregate.csv")).unwrap();
    assert_eq!(
        agg.lines().next(),
        Some("algorithm,env,t,mean_pseudo_regret,std_pseudo_regret,n_runs")
    );
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("exp1_metadata.json")).unwrap())
            .unwrap();
    assert!(meta["std_pseudo_regret"]
        .as_str()
        .unwrap()
        .contains("population"));
}

#[test]
fn seed_flag_and_thread_env_keep_output_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "e.json", SMALL);
    let read = |sub: &str, threads: &str, seed: &str| {
        let out = dir.path().join(sub);
        let o = Command::new(BIN)
            .args([
                "run",
                "--config",
                &cfg,
                "--seed",
                seed,
                "--out",
                out.to_str().unwrap(),
            ])
            .env("TSALLIS_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        std::fs::read(out.join("e_regret.csv")).unwrap()
    };
    let a = read("a", "1", "9");
    assert_eq!(a, read("b", "4", "9"));
    assert_ne!(a, read("c", "1", "10"));
}

#[test]
fn bounds_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "b.json", SMALL);
    let o = run(&["bounds", "--config", &cfg]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,bound_name,value"));
    lines.next();
    // K = 2, t = 2: 4·√4 + 1.
    assert_eq!(lines.next(), Some("2,adversarial_iw,9.0"));
    assert!(text.contains("self_bounding_rv"));
}

#[test]
fn oracle_check_passes() {
    let o = run(&["oracle-check", "--seed", "5"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 5);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn unknown_flag_exits_with_usage_error() {
    assert_eq!(run(&["run", "--bogus"]).status.code(), Some(2));
}

#[test]
fn malformed_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", "{\"horizon\": ");
    let o = run(&["run", "--config", &cfg]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert!(!run(&["run", "--config", "/nonexistent/x.json"])
        .status
        .success());
}
