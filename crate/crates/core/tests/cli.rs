use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_casimir")
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(binary()).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const AU_YIG: &str = "left = au_plasma\nright = yig_like\nb = 1 um\nT = 300 K\n";

#[test]
fn vacuum_gives_zero_pressure() {
    let (code, out, _) = run(&["pressure", "--config", config_dir().join("vacuum.conf").to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row[1], "0.00000000e0");
    }
}

#[test]
fn pressure_changes_sign_near_transition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.conf", &format!("{AU_YIG}separations = 1 um .. 4 um, 13 lin\n"));
    let (code, out, _) = run(&["pressure", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows = data_rows(&out);
    let totals: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    let crossing = totals.windows(2).find(|w| w[0].1 < 0.0 && w[1].1 > 0.0).expect("sign change");
    assert!(crossing[0].0 >= 2.0e-6 && crossing[1].0 <= 2.5e-6);
}

#[test]
fn missing_unit_exits_2_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.conf", &AU_YIG.replace("b = 1 um", "b = 1"));
    let (code, _, err) = run(&["pressure", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(err.contains("'b'"), "{err}");
}

#[test]
fn missing_config_and_bad_flags_exit_2() {
    assert_eq!(run(&["pressure"]).0, 2);
    assert_eq!(run(&["pressure", "--format", "xml"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.conf", AU_YIG);
    let (code, _, err) = run(&["pressure", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(err.contains("separations"));
}

#[test]
fn metrics_reports_no_transition() {
    let drude = config_dir().join("au_drude_yig.conf");
    let (code, _, err) = run(&["metrics", "--config", drude.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(err.contains("purely attractive"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.conf", &format!("{AU_YIG}right_mu0 = 1\n"));
    assert_eq!(run(&["metrics", "--config", &cfg]).0, 4);
}

#[test]
fn metrics_json_and_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.conf", &format!("{AU_YIG}bracket = 1.5 um, 3 um\n"));
    let (code, out, _) = run(&["metrics", "--config", &cfg, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let d_t = v["rows"][0]["d_t"].as_f64().unwrap();
    let d_max = v["rows"][0]["d_at_max"].as_f64().unwrap();
    assert!((d_t - 2.26e-6).abs() < 0.15 * 2.26e-6);
    assert!((d_max - 2.96e-6).abs() < 0.15 * 2.96e-6);
    assert!(v["rows"][0]["p_max"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_rows_fail_individually() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.conf",
        "left = au_plasma\nright = yig_like\nb = 1 nm\nT = 300 K\nsweep_parameter = mu0\nsweep_grid = 1, 160\n",
    );
    let (code, out, _) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows = data_rows(&out);
    assert!(rows[0].last().unwrap().contains("no transition"));
    assert!(rows[1].last().unwrap().is_empty());

    let cfg = write(dir.path(), "d.conf", &std::fs::read_to_string(&cfg).unwrap().replace("1, 160", "1, 1.000001"));
    assert_eq!(run(&["sweep", "--config", &cfg]).0, 4);
}

#[test]
fn locus_and_approx_commands() {
    let (code, out, _) = run(&["locus", "--config", config_dir().join("locus_thin.conf").to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 20);
    for row in &rows {
        let rel: f64 = row[3].parse().unwrap();
        assert!(rel.abs() < 0.10);
    }

    let (code, out, _) = run(&["approx-compare", "--config", config_dir().join("approx_thin.conf").to_str().unwrap()]);
    assert_eq!(code, 0);
    for row in data_rows(&out) {
        // the Pade form is only claimed for moderate coupling
        let beta: f64 = row[1].parse().unwrap();
        if beta > 0.55 {
            continue;
        }
        let engine: f64 = row[4].parse().unwrap();
        let pade: f64 = row[5].parse().unwrap();
        assert!(((pade - engine) / engine).abs() < 0.05);
    }
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_dir().join("thermal_mu20.conf");
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    let again = dir.path().join("again.csv");
    let cfg = cfg.to_str().unwrap();
    assert_eq!(run(&["sweep", "--config", cfg, "--out", first.to_str().unwrap(), "--threads", "1"]).0, 0);
    assert_eq!(run(&["sweep", "--config", cfg, "--out", second.to_str().unwrap(), "--threads", "4", "--seedless"]).0, 0);
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap());

    // the emitted CSV carries its own configuration
    assert_eq!(run(&["sweep", "--config", first.to_str().unwrap(), "--out", again.to_str().unwrap()]).0, 0);
    assert_eq!(a, std::fs::read(&again).unwrap());
}

#[test]
fn tolerance_flag_is_recorded() {
    let (code, out, _) = run(&["pressure", "--config", config_dir().join("vacuum.conf").to_str().unwrap(), "--tol", "1e-7"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "# rel_tol = 1e-7"));
    assert_eq!(run(&["pressure", "--config", config_dir().join("vacuum.conf").to_str().unwrap(), "--tol", "2"]).0, 2);
}
