use std::path::PathBuf;
use std::process::{Command, Output};

fn cmeis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmeis")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cmeis-cli-{}-{name}", std::process::id()))
}

#[test]
fn unknown_suite_exits_with_2() {
    let o = cmeis(&["run", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UnknownSuite"), "{}", stderr(&o));
}

#[test]
fn bad_preset_exits_with_2() {
    let path = scratch("preset.json");
    std::fs::write(&path, "{ not json").unwrap();
    let o = cmeis(&["run", "damerell", "--preset", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("PresetParseError"), "{}", stderr(&o));
}

#[test]
fn theta_suite_writes_report() {
    let path = scratch("theta.json");
    let o = cmeis(&["run", "theta-distribution", "--preset", "qi", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS theta-distribution on qi at 256 bits"));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let report: cmeis_core::SuiteReport = serde_json::from_str(&text).unwrap();
    assert!(report.pass);
    assert_eq!(report.schema, 1);
    assert!(report.records.iter().any(|r| r.label.starts_with("distribution b = ")));
}

#[test]
fn lvalue_routes_agree() {
    let o = cmeis(&["lvalue", "-k", "3", "-j", "0", "--route", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("direct") && out.contains("eisenstein"));
    assert!(out.contains(" agree"), "{out}");
}

#[test]
fn divergent_direct_route_is_refused() {
    let o = cmeis(&["lvalue", "-k", "2", "-j", "1", "--route", "direct"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ConvergenceRefused"), "{}", stderr(&o));
}

#[test]
fn damerell_detection_reports_rational_and_sqrt_flag() {
    let o = cmeis(&["lvalue", "-k", "4", "-j", "1", "--route", "eisenstein", "--detect"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("rational   1/48"), "{out}");
    assert!(out.contains("sqrt(-d)   yes"), "{out}");
}

#[test]
fn formal_group_of_the_preset_curve() {
    let o = cmeis(&["fg", "--curve", "qi", "--trunc", "20", "--show", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("law identities       exact"));
    assert!(out.contains("log' = omega         exact"));
    assert!(out.contains("curve equation       exact"));
}
