//! End-to-end tests of the command-line interface: output formats, exit
//! codes, atomic writes, and resume behavior.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_apcolor"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("apcolor-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const CERT_ENDPOINTS: &str =
    "0,28/548,34/548,62/548,99/548,158/548,274/548,390/548,449/548,486/548,514/548,520/548,1";

#[test]
fn eval_certificate() {
    let out = run(&["eval", "--endpoints", CERT_ENDPOINTS]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\"117/548\"\n");
}

#[test]
fn eval_rejects_garbage() {
    let out = run(&["eval", "--endpoints", "0,zebra,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_certificate_and_tie() {
    let out = run(&["certify", "--endpoints", CERT_ENDPOINTS]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["value"], "117/548");
    assert_eq!(json["is_critical"], true);
    assert!(json["gradient"].as_array().unwrap().iter().all(|g| g == "0"));

    // x0 + x2 = 1/2 = 2 x1 is an exact tie: degenerate input, exit 4
    let out = run(&["certify", "--endpoints", "0,1/4,1/2,3/4,1"]);
    assert_eq!(out.status.code(), Some(4));
    let err = stderr(&out);
    assert!(err.contains("x0") && err.contains("x2"), "{err}");
}

#[test]
fn enumerate_counts_and_cache() {
    let dir = tmpdir("enum");
    let out_path = dir.join("configs_n6.txt");
    let out = run(&[
        "enumerate",
        "--n",
        "6",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["n"], 6);
    assert_eq!(json["count"], 23);
    let cache = std::fs::read_to_string(&out_path).unwrap();
    assert!(cache.starts_with("n=6 count=23 version=1\n"));
    assert_eq!(cache.lines().count(), 24);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn enumerate_n0() {
    let dir = tmpdir("enum0");
    let out_path = dir.join("configs_n0.txt");
    let out = run(&["enumerate", "--n", "0", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["count"], 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn enumerate_rejects_odd_n() {
    let out = run(&["enumerate", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_io_failure_is_exit_2_and_writes_nothing() {
    let missing = Path::new("/nonexistent-dir-for-apcolor/out.txt");
    let out = run(&["enumerate", "--n", "2", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!missing.exists());
}

#[test]
fn enumerate_checkpoint_resume_is_byte_identical() {
    let dir = tmpdir("resume");
    let ck = dir.join("enum_n4.ckpt");
    let out_a = dir.join("a.txt");
    let out_b = dir.join("b.txt");

    let first = run(&[
        "enumerate",
        "--n",
        "4",
        "--out",
        out_a.to_str().unwrap(),
        "--checkpoint",
        ck.to_str().unwrap(),
    ]);
    assert!(first.status.success(), "{}", stderr(&first));

    // the checkpoint now sits at the final pair; resuming replays emission
    let second = run(&[
        "enumerate",
        "--n",
        "4",
        "--out",
        out_b.to_str().unwrap(),
        "--checkpoint",
        ck.to_str().unwrap(),
        "--resume",
    ]);
    assert!(second.status.success(), "{}", stderr(&second));
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn minimize_small_strata() {
    let out = run(&["minimize", "--n-max", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\"1\"\n");

    let out = run(&["minimize", "--n-max", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\"1/2\"\n");
}

#[test]
fn minimize_writes_report() {
    let dir = tmpdir("report");
    let report = dir.join("report.json");
    let out = run(&[
        "minimize",
        "--n-max",
        "4",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["n_max"], 4);
    assert_eq!(json["per_n"].as_array().unwrap().len(), 3);
    assert_eq!(json["global"]["value"], stdout(&out).trim().trim_matches('"'));
    assert_eq!(json["uncertified"], false);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn minimize_uncertified_gate() {
    let out = run(&["minimize", "--n-max", "14"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["minimize", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn minimize_offline_requires_caches() {
    let dir = tmpdir("offline");
    // no caches yet: offline run must fail with an i/o exit code
    let out = run(&[
        "minimize",
        "--n-max",
        "2",
        "--cache-dir",
        dir.to_str().unwrap(),
        "--offline",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // --offline without --cache-dir is a usage error
    let out = run(&["minimize", "--n-max", "2", "--offline"]);
    assert_eq!(out.status.code(), Some(1));
    // after a cache-writing run, the offline run succeeds
    let warm = run(&[
        "minimize",
        "--n-max",
        "2",
        "--cache-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(warm.status.success());
    let out = run(&[
        "minimize",
        "--n-max",
        "2",
        "--cache-dir",
        dir.to_str().unwrap(),
        "--offline",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\"1/2\"\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn minimize_uses_cache_dir() {
    let dir = tmpdir("cachedir");
    let out = run(&[
        "minimize",
        "--n-max",
        "4",
        "--cache-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.join("configs_n2.txt").exists());
    assert!(dir.join("configs_n4.txt").exists());
    // second run consumes the caches it just wrote
    let again = run(&[
        "minimize",
        "--n-max",
        "4",
        "--cache-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), stdout(&again));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn discrete_outputs() {
    let out = run(&["discrete", "--coloring", "RB", "--bead"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\"1/2\"\n");

    let out = run(&["discrete", "--coloring", "RB"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["n"], 2);
    assert_eq!(json["m3"], 2);
    assert_eq!(json["m3_prime"], 0);
    assert_eq!(json["ap3_total"], 2);
    assert_eq!(json["fraction_mono"], "1");
    assert_eq!(json["bead_fraction"], "1/2");

    let out = run(&["discrete", "--coloring", "RXB"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["discrete"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn discrete_file_input() {
    let dir = tmpdir("colorfile");
    let path = dir.join("colorings.txt");
    std::fs::write(&path, "RB\nRRBB\n").unwrap();
    let out = run(&["discrete", "--file", path.to_str().unwrap(), "--bead"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\"1/2\"\n\"1/2\"\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn circle_formula_and_estimate() {
    let out = run(&[
        "circle", "--p", "1/2", "--samples", "200000", "--seed", "7",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["exact"], "1/4");
    let estimate = json["estimate"].as_f64().unwrap();
    let sigma = json["std_error"].as_f64().unwrap();
    assert!((estimate - 0.25).abs() <= 4.0 * sigma);

    // byte-stable across repeat runs (same seed)
    let again = run(&[
        "circle", "--p", "1/2", "--samples", "200000", "--seed", "7",
    ]);
    assert_eq!(stdout(&out), stdout(&again));
}

#[test]
fn circle_arcs_file() {
    let dir = tmpdir("arcs");
    let path = dir.join("arcs.json");
    std::fs::write(
        &path,
        r#"[{"start":"0","length":"1/3","color":"R"},{"start":"1/3","length":"2/3","color":"B"}]"#,
    )
    .unwrap();
    let out = run(&[
        "circle",
        "--arcs",
        path.to_str().unwrap(),
        "--samples",
        "1000",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["p"], "1/3");
    assert_eq!(json["exact"], "1/3");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn worker_env_variable_is_honored() {
    let out = bin()
        .env("APCOLOR_WORKERS", "1")
        .args(["enumerate", "--n", "4", "--out"])
        .arg(std::env::temp_dir().join(format!("apcolor-env-{}.txt", std::process::id())))
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["count"], 3);
}
