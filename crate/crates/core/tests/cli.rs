use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qpack::cli::export::read_pattern_csv;

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"))
}

fn qpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpack")).args(args).output().unwrap()
}

fn summary(out: &Output, key: &str) -> Option<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
}

fn run_config(cmd: &str, name: &str, dir: &Path) -> Output {
    let cfg = configs().join(name);
    qpack(&[cmd, "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
}

#[test]
fn generate_reports_counts_and_writes_exports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("generate", "fig3.json", dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(summary(&out, "analysed").as_deref(), Some("6000"));
    assert_eq!(summary(&out, "emitted").as_deref(), Some("925"));
    assert_eq!(summary(&out, "truncated").as_deref(), Some("true"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let csv = dir.path().join("fig3_standard.csv");
    let points = read_pattern_csv(fs::File::open(csv).unwrap()).unwrap();
    assert_eq!(points.len(), 925);
    let tex = fs::read_to_string(dir.path().join("fig3_standard.tex")).unwrap();
    assert!(tex.contains("\\put(   11.00000,  20.00000){\\circle*{0.2}} \n"));
    let svg = fs::read_to_string(dir.path().join("fig3_standard.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 925);
}

#[test]
fn exports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_config("modify", "fig4.json", a.path());
    run_config("modify", "fig4.json", b.path());
    for f in ["fig4_modified.csv", "fig4_modified.tex", "fig4_modified.svg"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn modify_reports_1019() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("modify", "fig4.json", dir.path());
    assert!(out.status.success());
    assert_eq!(summary(&out, "emitted").as_deref(), Some("1019"));
}

#[test]
fn format_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig3.json");
    let out = qpack(&[
        "generate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--format",
        "latex",
    ]);
    assert!(out.status.success());
    assert!(dir.path().join("fig3_standard.tex").exists());
    assert!(!dir.path().join("fig3_standard.csv").exists());
}

#[test]
fn diffract_writes_matrix_and_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("diffract", "fig4.json", dir.path());
    assert!(out.status.success());
    assert_eq!(summary(&out, "i0").as_deref(), Some("1038361"));
    let matrix = fs::read_to_string(dir.path().join("fig4_modified_intensity.csv")).unwrap();
    assert_eq!(matrix.lines().count(), 100);
    assert!(matrix.lines().all(|l| l.split(',').count() == 100));
    let peaks = fs::read_to_string(dir.path().join("fig4_modified_peaks.csv")).unwrap();
    let n: usize = summary(&out, "peaks").unwrap().parse().unwrap();
    assert_eq!(peaks.lines().count(), n + 1);
}

#[test]
fn orbit_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("orbit", "icosahedral_three_shell.json", dir.path());
    assert!(out.status.success());
    assert_eq!(summary(&out, "k").as_deref(), Some("31"));

    let out = run_config("verify", "fig3.json", dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(summary(&out, "result").as_deref(), Some("pass"));
    assert_eq!(summary(&out, "oracle_disagreements").as_deref(), Some("0"));
}

#[test]
fn verify_rejects_a_perturbed_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("perturbed.json");
    let mut reps: Vec<String> = (0..6)
        .map(|j| {
            let a = std::f64::consts::PI * j as f64 / 6.0;
            format!("[{}, {}]", a.cos(), a.sin())
        })
        .collect();
    reps[2] = "[0.51, 0.86]".into();
    fs::write(&cfg, format!(r#"{{"group": "C12", "points": [{}]}}"#, reps.join(", "))).unwrap();
    let out = qpack(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn validation_errors_exit_1_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"group": "C12", "seeds": [[1, 0]], "p": 0}"#).unwrap();
    let out = qpack(&["modify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`p`"));
}

#[test]
fn missing_config_is_a_runtime_error() {
    let out = qpack(&["generate", "--config", "/nonexistent/qpack.json"]);
    assert_eq!(out.status.code(), Some(2));
}
