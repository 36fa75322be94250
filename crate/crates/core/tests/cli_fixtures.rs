//! Runs the `gausskit` binary over the committed envelope corpus.
//!
//! Each `fixtures/cli/NAME.json` is fed on stdin (with extra flags from
//! `NAME.args` when present); stdout must equal `NAME.out` byte for byte and
//! the exit code must equal `NAME.code`. Set `GAUSSKIT_BLESS=1` to rewrite
//! the expected files.

mod common;

use common::fixtures::{load_cases, run_case};

#[test]
fn corpus_reproduces_committed_outputs() {
    let bless = std::env::var_os("GAUSSKIT_BLESS").is_some();
    let cases = load_cases();
    assert!(cases.len() >= 12, "corpus has {} cases", cases.len());
    let mut failures = Vec::new();
    for case in &cases {
        let (code, stdout) = run_case(case);
        if bless {
            std::fs::write(case.dir.join(format!("{}.out", case.name)), &stdout).unwrap();
            std::fs::write(case.dir.join(format!("{}.code", case.name)), format!("{code}\n")).unwrap();
            continue;
        }
        let want_out = std::fs::read_to_string(case.dir.join(format!("{}.out", case.name)))
            .unwrap_or_else(|_| panic!("{}: missing .out", case.name));
        let want_code: i32 = std::fs::read_to_string(case.dir.join(format!("{}.code", case.name)))
            .unwrap_or_else(|_| panic!("{}: missing .code", case.name))
            .trim()
            .parse()
            .unwrap();
        if stdout != want_out || code != want_code {
            failures.push(format!("{}: exit {code} (want {want_code})\n{stdout}", case.name));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn exit_codes_follow_contract() {
    for case in load_cases() {
        let (code, stdout) = run_case(&case);
        let doc: serde_json::Value = serde_json::from_str(&stdout).expect("stdout is one JSON document");
        match code {
            0 => assert!(doc.get("error").is_none(), "{}", case.name),
            1 => assert!(doc["error"]["kind"].as_str().is_some(), "{}", case.name),
            2 => assert!(doc["error"]["kind"] != "malformed_input", "{}", case.name),
            other => panic!("{}: unexpected exit code {other}", case.name),
        }
    }
}

#[test]
fn spec_examples() {
    let cases = load_cases();
    let get = |name: &str| {
        let case = cases.iter().find(|c| c.name.starts_with(name)).unwrap();
        let (code, out) = run_case(case);
        (code, serde_json::from_str::<serde_json::Value>(&out).unwrap())
    };
    let (code, v) = get("01_");
    assert_eq!(code, 0);
    assert_eq!((v["member"].as_bool(), v["extreme"].as_bool()), (Some(true), Some(true)));
    assert!((v["d"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let (code, v) = get("02_");
    assert_eq!(code, 2);
    assert!((v["error"]["report"]["min_eig_complex"].as_f64().unwrap() + 0.5).abs() < 1e-12);

    let (code, v) = get("03_");
    assert_eq!(code, 0);
    assert!((v["d"][0].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() <= 1e-12);
}
