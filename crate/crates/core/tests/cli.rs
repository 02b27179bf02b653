use std::io::Write;
use std::process::{Command, Output, Stdio};

fn medlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medlink"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn invariants_from_piped_example() {
    let example = medlink(&["examples", "--name", "whitehead"]);
    assert!(example.status.success());
    let mut child = Command::new(env!("CARGO_BIN_EXE_medlink"))
        .args(["invariants", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(&example.stdout)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["determinant"], 8);
}

#[test]
fn unknot_invariants_are_trivial() {
    let out = medlink(&["invariants", "unknot", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["determinant"], 1);
    for rec in v["fingerprint"]["records"].as_array().unwrap() {
        assert!(rec["kernel_factors"].as_array().unwrap().is_empty());
    }
}

#[test]
fn bad_input_exits_1() {
    let dir = std::env::temp_dir().join("medlink-bad-input.json");
    std::fs::write(&dir, "{ not json").unwrap();
    assert_eq!(
        medlink(&["invariants", dir.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        medlink(&["mq", "hopf", "--ring", "6:2"]).status.code(),
        Some(1)
    );
}

#[test]
fn cap_exceeded_exits_2() {
    assert_eq!(
        medlink(&["mq", "whitehead", "--ring", "27:4", "--cap", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn quandle_tables() {
    for (args, size) in [
        (vec!["imq", "trefoil"], 3),
        (vec!["imq", "virtual-hopf"], 3),
        (vec!["mq", "hopf", "--ring", "7:3"], 2),
    ] {
        let out = medlink(&args);
        assert!(out.status.success(), "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["table"].as_array().unwrap().len(), size, "{args:?}");
    }
    let inf = medlink(&["mq", "virtual-hopf", "--ring", "0:1"]);
    assert_eq!(inf.status.code(), Some(0));
    assert!(stdout(&inf).contains("\"infinite\": true"));
}

#[test]
fn compare_verdicts() {
    let same = stdout(&medlink(&["compare", "whitehead", "7-2-8"]));
    assert!(same.contains("enhanced: equal; IMQ: isomorphic"), "{same}");
    let mirror = stdout(&medlink(&["compare", "whitehead", "whitehead-mirror"]));
    assert!(
        mirror.contains("enhanced: differ (longitude sign)"),
        "{mirror}"
    );
}

#[test]
fn output_is_deterministic() {
    let a = medlink(&["invariants", "7-2-8", "--json"]);
    let b = medlink(&["invariants", "7-2-8", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = medlink(&["compare", "whitehead", "whitehead-mirror", "--json"]);
    let d = medlink(&["compare", "whitehead", "whitehead-mirror", "--json"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn selftest_passes() {
    let out = medlink(&["selftest", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}
