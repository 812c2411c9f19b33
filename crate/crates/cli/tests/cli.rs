use std::fs;
use std::path::Path;
use std::process::Command;

const SMALL: &str = r#"
name = "small"
nu = 1
T = "1/10"
steps = 2
u0 = [0, 1, -1]

[nonlinearity]
g = [0, 0, 1]

[mesh]
space_elements = 8
time_elements = 16
"#;

fn coarse() -> String {
    SMALL
        .replace("u0 = [0, 1, -1]", "u0 = [0, 32, 0, -64, 32]")
        .replace("space_elements = 8", "space_elements = 2")
        .replace("time_elements = 16", "time_elements = 2")
}

fn stverify(dir: &Path, config: &str, args: &[&str]) -> (i32, String) {
    let cfg = dir.join("run.toml");
    fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_stverify"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

#[test]
fn verify_success_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = stverify(dir.path(), SMALL, &["verify", "--quiet"]);
    assert_eq!(code, 0);
    let out = dir.path().join("out");
    assert_eq!(listing(&out), ["config.toml", "constants.csv", "epsilon_log10.csv", "steps.csv"]);
    let steps = fs::read_to_string(out.join("steps.csv")).unwrap();
    let rows: Vec<&str> = steps.lines().collect();
    assert_eq!(rows[0], "i,M1_cal,M0_cal,Mt_cal,C_Delta,M1,M0,MT,alpha,beta,delta,eps_H1,eps_L2,status");
    assert_eq!(rows.len(), 3);
    assert!(rows[1..].iter().all(|r| r.ends_with(",ok")));
    let eps = fs::read_to_string(out.join("epsilon_log10.csv")).unwrap();
    assert_eq!(eps.lines().count(), 4);
}

#[test]
fn verified_rows_have_radii_above_the_residual() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = stverify(dir.path(), SMALL, &["verify", "--quiet"]);
    assert_eq!(code, 0);
    let steps = fs::read_to_string(dir.path().join("out/steps.csv")).unwrap();
    for row in steps.lines().skip(1) {
        let f: Vec<f64> = row.split(',').skip(1).take(12).map(|s| s.parse().unwrap()).collect();
        let (m1_cal, c_delta, alpha, beta, delta) = (f[0], f[3], f[7], f[8], f[9]);
        assert!(alpha.is_finite() && beta.is_finite(), "{row}");
        // G >= delta, and the printed constants are upper bounds rounded to 4 digits
        assert!(alpha >= 0.998 * m1_cal * delta && beta >= 0.998 * c_delta * delta, "{row}");
    }
}

#[test]
fn contraction_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = stverify(dir.path(), &coarse(), &["verify", "--quiet"]);
    assert_eq!(code, 2);
    let steps = fs::read_to_string(dir.path().join("out/steps.csv")).unwrap();
    let rows: Vec<&str> = steps.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("1,"));
    assert!(rows[1].ends_with(",Inf,Inf,contraction-failure"), "{}", rows[1]);
}

#[test]
fn constants_only_writes_constants() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = stverify(dir.path(), SMALL, &["constants", "--quiet"]);
    assert_eq!(code, 0);
    let out = dir.path().join("out");
    assert_eq!(listing(&out), ["constants.csv"]);
    let text = fs::read_to_string(out.join("constants.csv")).unwrap();
    assert!(text.starts_with("name,value\n"));
    assert!(text.lines().any(|l| l.starts_with("C1_tilde,")));
}

#[test]
fn reference_writes_contour() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = stverify(dir.path(), SMALL, &["reference", "--steps", "1"]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("out/contour.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,t,u"));
    assert_eq!(lines.count(), 51 * 21);
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let (code, msg) = stverify(dir.path(), &SMALL.replace("nu = 1", "nu = -1"), &["verify"]);
    assert_eq!(code, 1);
    assert!(msg.contains("`nu`"), "{msg}");
    let (code, msg) = stverify(dir.path(), &SMALL.replace("g = [0, 0, 1]", "g = [0, 0, 0, 0, 1]"), &["verify"]);
    assert_eq!(code, 1);
    assert!(msg.contains("unsupported nonlinearity degree"), "{msg}");
}

#[test]
fn flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = stverify(dir.path(), SMALL, &["verify", "--quiet", "--steps", "1", "--px", "3"]);
    assert_eq!(code, 0);
    let echo = fs::read_to_string(dir.path().join("out/config.toml")).unwrap();
    assert!(echo.contains("steps = 1") && echo.contains("px = 3"), "{echo}");
    let out = Command::new(env!("CARGO_BIN_EXE_stverify")).args(["verify", "--px", "4"]).output().unwrap();
    assert_ne!(out.status.code(), Some(0));
}
