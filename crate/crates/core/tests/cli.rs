use std::process::{Command, Output};

use serde_json::Value;

fn maxcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxcurve")).args(args).output().unwrap()
}

fn reports(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn passing_check_exits_zero() {
    let out = maxcurve(&["--check", "hermitian-count", "--param", "q=3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = reports(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["verdict"], "pass");
    assert_eq!(r[0]["params"]["q"], 3);
    assert_eq!(r[0]["schema"], 1);
    assert!(r[0].get("millis").is_none());
}

#[test]
fn failing_check_exits_one() {
    let out = maxcurve(&["--check", "triangolo-census", "--param", "n=9"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(reports(&out)[0]["verdict"], "fail");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["--check", "no-such-check"][..],
        &["--check", "lemmino", "--param", "bogus=1"],
        &["--check", "lemmino", "--param", "m_max"],
        &["--param", "q=2"],
        &["--all", "--check", "lemmino"],
        &[],
        &["--all", "--threads", "0"],
    ] {
        let out = maxcurve(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unsupported_check_exits_three() {
    let out = maxcurve(&["--check", "delta-ledger", "--param", "q=16"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(reports(&out)[0]["verdict"], "unsupported");
}

#[test]
fn filter_selects_registered_runs() {
    let out = maxcurve(&["--all", "--filter", "delta", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    let r = reports(&out);
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|v| v["name"] == "delta-ledger" && v["millis"].is_u64()));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 checks: 2 passed"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.jsonl");
    let out = maxcurve(&["--all", "--filter", "gs", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    assert_eq!(reports(&out).len(), 3);
}

#[test]
fn table_format_has_summary() {
    let out = maxcurve(&["--check", "lemmino", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("check"));
    assert!(text.contains("lemmino"));
    assert!(text.trim_end().ends_with("1 checks: 1 passed, 0 failed, 0 unsupported"));
}

#[test]
fn list_names_every_check() {
    let out = maxcurve(&["--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), maxcurve::verifier::REGISTRY.len());
    assert!(text.lines().all(|l| l.split('\t').count() == 3));
}

#[test]
fn field_config_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "table_max = 4096\n").unwrap();
    let out = maxcurve(&["--field-config", good.to_str().unwrap(), "--check", "hermitian-count", "--param", "q=8"]);
    assert_eq!(out.status.code(), Some(0));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "table_max = \"many\"\n").unwrap();
    let out = maxcurve(&["--field-config", bad.to_str().unwrap(), "--check", "lemmino"]);
    assert_eq!(out.status.code(), Some(2));
    let out = maxcurve(&["--field-config", dir.path().join("missing.toml").to_str().unwrap(), "--list"]);
    assert_eq!(out.status.code(), Some(2));
}
