use std::path::Path;
use std::process::Command;

use edamp::harness::DEFAULT_CONFIG;

fn edamp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edamp"))
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let text = DEFAULT_CONFIG
        .replace("nx = 256", "nx = 32")
        .replace("ny = 2048", "ny = 513")
        .replace("count = 10", "count = 4");
    let path = dir.join("small.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn read_all(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "run.json")
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn decay_output_is_byte_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = tmp.path().join(format!("out{threads}"));
        let status = edamp()
            .args(["decay", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .env("EDAMP_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(read_all(&out));
    }
    assert!(outputs[0].len() >= 8);
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn simulate_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let run = |name: &str| {
        let out = tmp.path().join(name);
        let ok = edamp()
            .args(["simulate", "--threads", "2", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap()
            .success();
        assert!(ok);
        read_all(&out)
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn validate_passes_on_default_physics() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = edamp()
        .args(["validate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("validate.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["value"].is_number() && c.get("threshold").is_some()));
}

#[test]
fn validate_fails_with_nonzero_exit() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(small_config(tmp.path()))
        .unwrap()
        .replace("[fit]", "[tolerances]\nconservation = 1e-300\n\n[fit]");
    let cfg = tmp.path().join("strict.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = edamp()
        .args(["validate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn bad_config_is_rejected_before_computing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, DEFAULT_CONFIG.replace("b = 0.75", "b = 2.0")).unwrap();
    let out = edamp().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml") && err.contains("a > b"), "{err}");

    std::fs::write(&cfg, DEFAULT_CONFIG.replace("nx = 256", "nx = \"many\"")).unwrap();
    let out = edamp().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("nx"), "{err}");
}

#[test]
fn short_strip_warns() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(small_config(tmp.path()))
        .unwrap()
        .replace("ymax = 2.6", "ymax = 1.5");
    let cfg = tmp.path().join("short.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = edamp()
        .args(["average", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn default_config_subcommand_prints_a_loadable_config() {
    let out = edamp().arg("default-config").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(edamp::harness::ExperimentConfig::from_toml(&text).is_ok());
}

#[test]
fn quantity_and_measure_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path());
    let out = edamp()
        .args(["decay", "--quantity", "u_perp", "--measure", "physical", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.starts_with("u_perp, physical,"));
    assert!(tmp.path().join("decay_u_perp_physical.dat").exists());
}
