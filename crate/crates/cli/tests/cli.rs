use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holomotion"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &Path, value: serde_json::Value) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    path
}

fn run(config: &Path, out: &Path, envs: &[(&str, &str)]) -> Output {
    bin().arg("run").arg(config).arg("--output").arg(out).envs(envs.iter().copied()).output().unwrap()
}

#[test]
fn missing_motion_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), serde_json::json!({ "scenario": "chirka-extend", "params": { "motion": "nowhere/motion.json" } }));
    let out = run(&cfg, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nowhere/motion.json"), "{stderr}");
}

#[test]
fn unknown_scenario_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), serde_json::json!({ "scenario": "teichmuller" }));
    let out = bin().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("run").arg(dir.path().join("absent.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let out = bin().arg("validate").arg(configs().join("fatou.json")).env("HOLOMOTION_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_configs_validate() {
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let out = bin().arg("validate").arg(&path).output().unwrap();
            assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn fatou_scenario_writes_its_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fatou");
    let out = run(&configs().join("fatou.json"), &out_dir, &[]);
    // The iteration stops at m_max without meeting the tolerance.
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["convergence.csv", "residuals.csv", "orbit.csv", "fatou.json", "manifest.json"] {
        let text = fs::read_to_string(out_dir.join(name)).unwrap();
        assert!(text.lines().count() > 1 || name.ends_with(".json"), "{name} is empty");
        assert!(!text.is_empty());
    }
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "non-convergence");
    assert_eq!(manifest["seed"], 20240917);
    assert!(manifest["inputs"][0].as_str().unwrap().ends_with("z_plus_z2.json"));
    let report = bin().arg("report").arg(&out_dir).output().unwrap();
    assert!(report.status.success());
    assert!(String::from_utf8_lossy(&report.stdout).contains("convergence.csv: 64 rows"));
}

#[test]
fn runs_are_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        serde_json::json!({
            "scenario": "chirka-extend",
            "seed": 3,
            "params": { "grid": { "center": [0.4, 0.3], "half_width": 1.3, "n": 6 }, "random_params": 4 }
        }),
    );
    let a = run(&cfg, &dir.path().join("a"), &[("HOLOMOTION_THREADS", "1")]);
    let b = run(&cfg, &dir.path().join("b"), &[("HOLOMOTION_THREADS", "3")]);
    assert!(a.status.success() && b.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    for name in ["extension.csv", "tangents.csv", "diagnostics.json"] {
        assert_eq!(fs::read(dir.path().join("a").join(name)).unwrap(), fs::read(dir.path().join("b").join(name)).unwrap(), "{name}");
    }
}

#[test]
fn seed_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), serde_json::json!({ "scenario": "kobayashi", "seed": 1, "params": { "random_pairs": 5 } }));
    let a = run(&cfg, &dir.path().join("a"), &[]);
    let b = bin().arg("run").arg(&cfg).arg("--output").arg(dir.path().join("b")).arg("--seed").arg("2").output().unwrap();
    assert!(a.status.success() && b.status.success());
    let da = fs::read(dir.path().join("a/distances.csv")).unwrap();
    let db = fs::read(dir.path().join("b/distances.csv")).unwrap();
    assert_ne!(da, db);
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("b/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 2);
}
