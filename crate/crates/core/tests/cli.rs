use std::process::Command;

use serde_json::Value;

fn iyb(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_iyb")).args(args).output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn info_reports_invariants() {
    let (code, v, _) = iyb(&["info", "--group", "heis:5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["order"], 125);
    assert_eq!(v["result"]["nilpotency_class"], 2);
    assert_eq!(v["result"]["center_order"], 5);
    let (_, v, _) = iyb(&["info", "--group", "cyclic:6"]);
    assert_eq!(v["result"]["nilpotency_class"], 1);
}

#[test]
fn non_associative_table_is_an_input_error() {
    let path = std::env::temp_dir().join(format!("iyb-loop-{}.tbl", std::process::id()));
    std::fs::write(&path, "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n").unwrap();
    let (code, _, err) = iyb(&["info", "--group", &format!("table:{}", path.display())]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 3);
    assert!(err.contains("not associative"), "{err}");
}

#[test]
fn bad_parameters_fail_construction() {
    assert_eq!(iyb(&["construct", "hertweck-d", "--q", "6"]).0, 2);
    assert_eq!(iyb(&["construct", "hertweck-d", "--q", "7"]).0, 2);
    assert_eq!(iyb(&["--quiet", "construct", "hertweck-d", "--q", "7", "--allow-any-odd-q"]).0, 0);
    assert_eq!(iyb(&["search", "auto", "--group", "sym:3"]).0, 2);
    assert_eq!(iyb(&["verify", "/nonexistent/cert.json"]).0, 3);
    assert_eq!(iyb(&["info", "--group", "bogus:3"]).0, 3);
}

#[test]
fn quick_selftest_passes() {
    let (code, v, err) = iyb(&["selftest", "--quick"]);
    assert_eq!(code, 0, "{err}");
    assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
