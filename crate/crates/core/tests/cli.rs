use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contact-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn header(file: &Path) -> String {
    fs::read_to_string(file)
        .unwrap()
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .to_string()
}

fn rows(file: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(file)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

const SMALL: &str = "[gas]\ngamma = 1.6666666666666667\nr = 1.0\nmu = 1.0\nkappa = 1.0\n\
[states]\nv_minus = 1.0\ntheta_minus = 1.0\ntheta_plus = 2.0\n\
[grid]\nlength = 100.0\ncells = 512\n\
[run]\nt_end = 20.0\nsamples = 30\nsnapshot_times = [0.0, 5.0]\n";

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    path(&p).to_string()
}

#[test]
fn default_profile_run_writes_declared_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["profile", "--out", path(dir.path())]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(header(&dir.path().join("profile.csv")), "t,x,Theta,V,U,F,G");
    assert!(dir.path().join("decay_fits.csv").exists());
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lemma32.json")).unwrap())
            .unwrap();
    assert!(report["decay"]["lx"]["fit"]["exponent"].as_f64().unwrap() < 0.0);
    assert_eq!(report["config"]["grid"]["cells"], 2048);
}

#[test]
fn even_delta0_reciprocal_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &SMALL.replace("[run]\n", "[run]\ndelta0_inv = 2\n"),
    );
    let out = run(&["profile", "--config", &cfg, "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/delta0 must be an odd integer"));
}

#[test]
fn missing_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("mu = 1.0\n", ""));
    let out = run(&["kernel", "--config", &cfg, "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`mu`"));
}

#[test]
fn usage_error_exits_2() {
    assert_eq!(
        run(&["simulate", "--grid-n", "many"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn degenerate_kernel_gap_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &SMALL.replace("theta_plus = 2.0", "theta_plus = 1.0"),
    );
    let out = run(&["kernel", "--config", &cfg, "--out", path(dir.path())]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(header(&dir.path().join("gap.csv")), "t,q,normalized");
    let gap = rows(&dir.path().join("gap.csv"));
    assert!(!gap.is_empty());
    assert!(gap.iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
    assert_eq!(header(&dir.path().join("kernel.csv")), "t,x,theta2");
}

#[test]
fn constant_state_reports_no_drift() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL
        .replace("v_minus = 1.0", "v_minus = 2.0")
        .replace("theta_minus = 1.0", "theta_minus = 2.0");
    let cfg = write_config(dir.path(), &text);
    let out = run(&["simulate", "--config", &cfg, "--out", path(dir.path())]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("metadata.json")).unwrap())
            .unwrap();
    assert!(meta["max_v0_drift"].as_f64().unwrap() < 1e-12);
    assert!(!meta["version"].as_str().unwrap().is_empty());
}

fn perturbed(amplitude: f64) -> String {
    format!("{SMALL}[perturbation]\namplitude = {amplitude}\ncenter = 25.0\nwidth = 2.5\n")
}

#[test]
fn perturbed_run_decays_and_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = write_config(a.path(), &perturbed(0.05));
    for dir in [&a, &b] {
        let out = run(&["simulate", "--config", &cfg, "--out", path(dir.path())]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let diag = a.path().join("diagnostics.csv");
    assert_eq!(
        header(&diag),
        "t,l2_phi,l2_psi,l2_zeta,linf_pert,entropy,n1_bar,lnTheta_x_sq,lnTheta_xx_sq,lnTheta_xxx_sq,theta_gap_linf_sq,v0_drift"
    );
    assert_eq!(
        header(&a.path().join("snapshots.csv")),
        "t,x,v,u,theta,V,U,Theta"
    );
    let d = rows(&diag);
    assert!(d.last().unwrap()[4] < d[0][4]);
    for name in ["diagnostics.csv", "snapshots.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn every_artifact_embeds_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &perturbed(-0.05));
    let out = run(&["simulate", "--config", &cfg, "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "negative amplitude is allowed");
    for entry in fs::read_dir(dir.path()).unwrap() {
        let p = entry.unwrap().path();
        let text = fs::read_to_string(&p).unwrap();
        match p.extension().and_then(|e| e.to_str()) {
            Some("csv") => assert!(text.contains("# amplitude = -0.05"), "{}", p.display()),
            Some("json") => {
                let v: Value = serde_json::from_str(&text).unwrap();
                assert_eq!(v["config"]["perturbation"]["amplitude"], -0.05);
            }
            _ => {}
        }
    }
}

#[test]
fn non_positive_initial_state_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &perturbed(-1.5));
    let out = run(&["simulate", "--config", &cfg, "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = run(&[
        "profile",
        "--config",
        &cfg,
        "--out",
        path(dir.path()),
        "--grid-n",
        "256",
        "--t-end",
        "5",
        "--delta0-k",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert!(text.contains("# cells = 256"));
    assert!(text.contains("# t_end = 5.0"));
    assert!(text.contains("# delta0_inv = 3"));
}

#[test]
fn verify_list_prints_identifiers() {
    let out = run(&["verify", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for k in 1..=10 {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("A{k} "))),
            "A{k} missing"
        );
    }
}

#[test]
fn verify_cheap_criteria_pass_and_write_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--only",
        "A1",
        "--only",
        "A6",
        "--only",
        "A10",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["criteria"].as_array().unwrap().len(), 3);
}

#[test]
fn corrupted_diffusion_constant_fails_profile_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--only",
        "A4",
        "--fault-a-scale",
        "1.05",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("A4") && stdout.contains("FAIL"), "{stdout}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("A4"));
}
