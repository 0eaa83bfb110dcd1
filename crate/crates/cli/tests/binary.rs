use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use proptest::prelude::*;
use twistlaurent::{sample, RingSig};
use twistlaurent_cli::{OutputFormat, Session, Value};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twistlaurent"))
        .args(args)
        .env_clear()
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

/// Script file removed on drop.
struct Script(PathBuf);

impl Script {
    fn new(body: &str) -> Self {
        static N: AtomicUsize = AtomicUsize::new(0);
        let name = format!("twistlaurent-{}-{}.tl", std::process::id(), N.fetch_add(1, Ordering::Relaxed));
        let path = std::env::temp_dir().join(name);
        std::fs::write(&path, body).unwrap();
        Script(path)
    }

    fn arg(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for Script {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

#[test]
fn exit_codes() {
    let cases =
        [("1 + x1\n", 0), ("1 + * x1\n", 3), ("z9\n", 4), ("inv(x1, x1)\n", 5), ("val(x1) + 1\n", 6), ("inv(0)\n", 11)];
    for (body, code) in cases {
        let s = Script::new(body);
        let out = run(&["--script", s.arg()], "");
        assert_eq!(out.status.code(), Some(code), "{body:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = run(&["--script", "/nonexistent/script.tl"], "");
    assert_eq!(out.status.code(), Some(7));
    let out = run(&["--bogus-flag"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn script_errors_name_the_line() {
    let s = Script::new("let f = 1 + x1\n# comment\nf + nope\n");
    let out = run(&["--script", s.arg()], "");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: line 3:"), "{err}");
}

#[test]
fn environment_configures_the_ring() {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_twistlaurent"));
    let out = cmd
        .env_clear()
        .env("TWISTLAURENT_INDICES", "2,3")
        .env("TWISTLAURENT_WINDOW", "6")
        .stdin(Stdio::null())
        .args(["--check", "commutators", "--samples", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().ends_with("result: pass\n"));
}

#[test]
fn json_report_parses() {
    let out = run(&["--check", "kummer", "--samples", "3", "--format", "json"], "");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["p"], 2);
    assert!(v["sections"].as_array().is_some_and(|s| !s.is_empty()));
}

#[test]
fn repl_keeps_going_after_errors() {
    let out = run(&[], "let g = 2*y1\ng^-1\n)\nval(g)\n");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3, "{text}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_series_parse_back(seed in any::<u64>()) {
        let sig = Arc::new(RingSig::twisted(2, &[2, 3]).unwrap().with_window(6).unwrap());
        let f = sample::series(&mut sample::rng(seed), &sig, 6, 2);
        let mut session = Session::new(sig, 0, OutputFormat::Text);
        match session.eval_str(&f.format()).unwrap() {
            Value::Series(g) => prop_assert_eq!(g, f),
            other => prop_assert!(false, "not a series: {:?}", other),
        }
    }
}
