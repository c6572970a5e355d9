use std::path::Path;

use regmeas::run;
use serde_json::Value;

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("regmeas").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = exec(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn diagnostic(err: &str) -> Value {
    serde_json::from_str(err.lines().last().unwrap()).unwrap()
}

#[test]
fn josephus_closed_form_row() {
    let out = ok(&["cdf", "--builtin", "josephus", "--closed-form", "--depth", "12", "--grid", "64"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,closed_form_d12"));
    let row = lines.find(|l| l.starts_with("0.5,")).unwrap();
    let f: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((f - 0.25).abs() < 1e-9);
    assert_eq!(out.lines().count(), 66);
}

#[test]
fn dumas_diagnose_is_gated() {
    let (code, out, err) = exec(&["diagnose", "--builtin", "dumas"]);
    assert_eq!(code, 3);
    let d = diagnostic(&err);
    assert_eq!(d["error"], "non-unique-dominant-eigenvalue");
    assert_eq!(d["description"], "non-unique dominant eigenvalue");
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["spectrum"]["dominant_unique"], false);
    assert!(report["holder"].is_null());
}

#[test]
fn dumas_scan_rows() {
    let out = ok(&["scan", "--builtin", "dumas", "--interval", "0", "1/2", "--levels", "2"]);
    assert_eq!(out, "n,mass\n1,1\n2,-1/17\n");
    let json = ok(&["scan", "--builtin", "dumas", "--interval", "0", "1/2", "--levels", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[1]["mass"], "-1/17");
}

#[test]
fn floats_are_refused_for_exact_inputs() {
    let (code, _, err) = exec(&["scan", "--builtin", "dumas", "--interval", "0", "0.5", "--levels", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("floats are refused"));
    let (code, _, _) = exec(&["conjugate", "--builtin", "josephus", "--matrix", "1,0.5;0,1"]);
    assert_eq!(code, 1);
}

#[test]
fn csv_headers() {
    let cases: [(&[&str], &str); 6] = [
        (&["eval", "--builtin", "stern", "--to", "3"], "m,f,state_1,state_2"),
        (&["sums", "--builtin", "sumdigits", "--levels", "2"], "n,Sigma_1,Sigma_2"),
        (&["measure", "--builtin", "one", "--level", "2"], "m,x,mu_1"),
        (&["cdf", "--builtin", "one", "--level", "6", "--grid", "4"], "x,empirical_n6"),
        (
            &["fourier", "--builtin", "stern", "--t-from", "1", "--t-to", "2", "--level", "8"],
            "t,component,empirical_re,empirical_im,product_re,product_im",
        ),
        (&["builtin", "--list"], "name"),
    ];
    for (args, header) in cases {
        assert_eq!(ok(args).lines().next(), Some(header), "{args:?}");
    }
}

#[test]
fn small_tables() {
    assert_eq!(ok(&["eval", "--builtin", "stern", "--to", "3"]), "m,f,state_1,state_2\n0,0,0,1\n1,1,1,1\n2,1,1,2\n3,2,2,1\n");
    assert_eq!(ok(&["sums", "--builtin", "sumdigits", "--levels", "2"]), "n,Sigma_1,Sigma_2\n0,1,1\n1,3,2\n2,8,4\n");
    assert_eq!(ok(&["measure", "--builtin", "one", "--level", "1"]), "m,x,mu_1\n0,0,1/2\n1,1/2,1/2\n");
}

#[test]
fn both_routes_report_deviation() {
    let (code, out, err) = exec(&["cdf", "--builtin", "stern", "--level", "12", "--closed-form", "--grid", "16"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("x,empirical_n12,closed_form_d12\n"));
    let dev: f64 = err.trim().strip_prefix("max_deviation,").unwrap().parse().unwrap();
    assert!(dev < 0.01);
}

#[test]
fn direct_route_is_degenerate_for_josephus() {
    let (code, _, err) = exec(&["cdf", "--builtin", "josephus", "--closed-form", "--route", "direct"]);
    assert_eq!(code, 3);
    assert_eq!(diagnostic(&err)["error"], "degenerate-nonvanishing-index");
}

#[test]
fn jordan_file_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jordan.json");
    std::fs::write(&path, r#"{"rho": 4, "v": 1, "V": [[1], [0]], "M": [1]}"#).unwrap();
    let with = ok(&["cdf", "--builtin", "josephus", "--closed-form", "--depth", "8", "--jordan", path.to_str().unwrap()]);
    let without = ok(&["cdf", "--builtin", "josephus", "--closed-form", "--depth", "8"]);
    assert_eq!(with, without);
    std::fs::write(&path, r#"{"rho": 4, "v": 1, "V": [1, 0, 0], "M": [1]}"#).unwrap();
    let (code, _, _) = exec(&["cdf", "--builtin", "josephus", "--closed-form", "--jordan", path.to_str().unwrap()]);
    assert_eq!(code, 2);
}

fn write_rep(dir: &Path, name: &str) -> String {
    let path = dir.join(format!("{name}.json"));
    ok(&["builtin", "--emit", name, "--output", path.to_str().unwrap()]);
    path.to_str().unwrap().to_string()
}

#[test]
fn emitted_representations_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["stern", "josephus", "dumas"] {
        let file = write_rep(dir.path(), name);
        let runs: [&[&str]; 9] = [
            &["eval", "--to", "40"],
            &["sums", "--levels", "8"],
            &["diagnose", "--jsr-depth", "6"],
            &["measure", "--level", "3"],
            &["cdf", "--level", "8", "--grid", "8"],
            &["fourier", "--t-to", "2", "--level", "6", "--truncation", "10"],
            &["scan", "--interval", "1/4", "3/4", "--levels", "12"],
            &["lift", "--power", "2"],
            &["conjugate", "--matrix", "1,1;0,1"],
        ];
        for args in runs {
            let mut a: Vec<&str> = args.to_vec();
            a.extend(["--builtin", name]);
            let mut b: Vec<&str> = args.to_vec();
            b.extend(["--rep", &file]);
            assert_eq!(exec(&a), exec(&b), "{name} {args:?}");
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let args = ["fourier", "--builtin", "stern", "--t-to", "4", "--level", "10"];
    assert_eq!(exec(&args), exec(&args));
    let args = ["cdf", "--builtin", "stern", "--level", "10", "--closed-form", "--depth", "10", "--grid", "32"];
    assert_eq!(exec(&args), exec(&args));
}

#[test]
fn invalid_representation_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    for text in [
        r#"{"name":"x","k":2,"dim":2,"matrices":[[1,0,0,1]],"terminal":[1,0]}"#,
        r#"{"name":"x","k":2,"dim":2,"matrices":[[1,0,0,1],[1,0,1]],"terminal":[1,0]}"#,
        "[",
    ] {
        std::fs::write(&path, text).unwrap();
        let (code, _, err) = exec(&["sums", "--rep", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{text}");
        assert_eq!(diagnostic(&err)["error"], "invalid-representation");
    }
    let (code, _, _) = exec(&["sums", "--rep", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn source_is_required_and_exclusive() {
    assert_eq!(exec(&["sums"]).0, 1);
    assert_eq!(exec(&["sums", "--builtin", "stern", "--rep", "x.json"]).0, 1);
    assert_eq!(exec(&["sums", "--builtin", "fib"]).0, 1);
}

#[test]
fn conjugation_and_lifting() {
    let out = ok(&["conjugate", "--builtin", "josephus", "--matrix", "1,-1;1,1"]);
    let rep = regmeas::repfile::rep_from_json(&out).unwrap();
    assert!(rep.digit_matrices().iter().all(|m| m.is_nonnegative()));
    for m in 0..64 {
        assert_eq!(rep.evaluate(m), regmeas_core::builtin("josephus").unwrap().evaluate(m));
    }
    let (code, out, _) = exec(&["lift", "--builtin", "stern", "--power", "2"]);
    assert_eq!(code, 0);
    let lifted = regmeas::repfile::rep_from_json(&out).unwrap();
    assert_eq!(lifted.base(), 4);
    assert_eq!(lifted.evaluate(11), regmeas_core::rational::int(5));
    let (_, _, err) = exec(&["lift", "--builtin", "josephus"]);
    assert!(err.contains("B_0 w != w"));
}

#[test]
fn thread_cap_is_validated() {
    // Only observable through the binary, where the environment is private to the child.
    let bin = env!("CARGO_BIN_EXE_regmeas");
    let run = |threads: &str| {
        std::process::Command::new(bin)
            .args(["cdf", "--builtin", "stern", "--level", "8", "--grid", "16"])
            .env("REGMEAS_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}
