use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shehu_cli::table::{read_csv, ResultTable};

fn shehu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shehu"))
        .args(args)
        .env_remove("SHEHU_QUAD_TOL")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

/// Copies a shipped config into a fresh directory so its output lands there.
fn staged(name: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(name);
    std::fs::copy(config(name), &path).unwrap();
    (dir, path)
}

#[test]
fn transform_examples() {
    let o = shehu(&["transform", "sin(3*t)", "--s", "2", "--u", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "image: 3u^2/(s^2+9u^2)\nvalue: 0.230769\n");

    let o = shehu(&["transform", "1", "--s", "4", "--u", "2"]);
    assert_eq!(stdout(&o), "image: u/s\nvalue: 0.5\n");

    let o = shehu(&["transform", "sin(3*t)", "--s", "2", "--u", "1", "--mode", "numeric"]);
    let text = stdout(&o);
    assert!(
        text.contains("numeric:    0.230769") && text.contains("symbolic:   0.230769"),
        "{text}"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        shehu(&["transform", "exp(2*t)", "--s", "1", "--u", "1"]).status.code(),
        Some(3)
    );
    assert_eq!(
        shehu(&["transform", "sin(3*", "--s", "1", "--u", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        shehu(&["transform", "t*sin(x)", "--s", "1", "--u", "1"]).status.code(),
        Some(4)
    );
    assert_eq!(
        shehu(&["transform", "t", "--s", "-1", "--u", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(shehu(&["invert", "u/(s"]).status.code(), Some(2));
    assert_eq!(shehu(&["invert", "s/u"]).status.code(), Some(5));
    assert_eq!(shehu(&["solve", "/nonexistent/config.json"]).status.code(), Some(1));
}

#[test]
fn quad_tol_env_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_shehu"))
        .args(["transform", "t", "--s", "1", "--u", "1", "--mode", "numeric"])
        .env("SHEHU_QUAD_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invert_examples() {
    for (image, want) in [
        ("3u^2/(s^2+9u^2)", "sin(3*t)"),
        ("u/s", "1"),
        ("u^2/(s-2u)^2", "t*exp(2*t)"),
    ] {
        let o = shehu(&["invert", image]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).lines().next().unwrap(), format!("v(t) = {want}"));
    }
}

#[test]
fn solve_newton_cooling() {
    let (dir, path) = staged("newton_cooling.json");
    let o = shehu(&["solve", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("v = 100*exp(-0.5*t)\n"));
    let (columns, rows) = read_csv(&dir.path().join("newton_cooling.csv")).unwrap();
    assert_eq!(columns, ["t", "v"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0], [0.0, 100.0]);
    assert_eq!(rows[1][0], 1.0);
    assert!((rows[1][1] - 60.653_065_971_263_34).abs() < 1e-10);
}

#[test]
fn solve_heat_matches_closed_form() {
    let (dir, path) = staged("heat_1d.json");
    assert!(shehu(&["solve", path.to_str().unwrap()]).status.success());
    let (columns, rows) = read_csv(&dir.path().join("heat_1d.csv")).unwrap();
    assert_eq!(columns, ["x", "t", "v"]);
    assert_eq!(rows.len(), 21 * 21);
    for r in &rows {
        let (x, t) = (r[0], r[1]);
        let want = 10.0 * (-32.0 * PI * PI * t).exp() * (4.0 * PI * x).sin()
            - 5.0 * (-72.0 * PI * PI * t).exp() * (6.0 * PI * x).sin();
        assert!((r[2] - want).abs() < 1e-12, "{r:?} {want}");
    }
}

#[test]
fn solve_pme_prints_closed_form() {
    let (dir, path) = staged("pme_hpm.json");
    let o = shehu(&["solve", path.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("v = x + t\n"));
    let table: ResultTable =
        serde_json::from_slice(&std::fs::read(dir.path().join("pme_hpm_series.json")).unwrap()).unwrap();
    assert_eq!(table.columns, ["x", "t", "v"]);
    for r in &table.rows {
        assert_eq!(r[2], r[0] + r[1]);
    }
}

#[test]
fn identical_configs_give_identical_files() {
    let (dir, path) = staged("heat_1d.json");
    assert!(shehu(&["solve", path.to_str().unwrap()]).status.success());
    let first = std::fs::read(dir.path().join("heat_1d.csv")).unwrap();
    assert!(shehu(&["solve", path.to_str().unwrap()]).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("heat_1d.csv")).unwrap());
}

#[test]
fn bad_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(config("heat_1d.json"))
        .unwrap()
        .replace("\"6*pi\"", "1.0");
    std::fs::write(&path, text).unwrap();
    assert_eq!(shehu(&["solve", path.to_str().unwrap()]).status.code(), Some(6));
    assert!(!dir.path().join("heat_1d.csv").exists());

    std::fs::write(&path, "{\"kind\": \"heat_1d\"}").unwrap();
    assert_eq!(shehu(&["solve", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = shehu(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
}
