use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn kopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kopt"))
        .args(args)
        .output()
        .unwrap()
}

fn kopt_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kopt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn help_lists_subcommands_and_flags() {
    let o = kopt(&["--help"]);
    let text = stdout(&o);
    for sub in [
        "lattice",
        "centroid",
        "koptimal",
        "evaluate",
        "optimize",
        "efficiency",
        "transform",
        "table",
    ] {
        assert!(text.contains(sub), "missing {sub}");
    }
    for flag in ["--threads", "--output", "--help", "--version"] {
        assert!(text.contains(flag), "missing {flag}");
    }
    let o = kopt(&["optimize", "--help"]);
    let text = stdout(&o);
    for flag in [
        "--support",
        "--order",
        "--criterion",
        "--multistarts",
        "--seed",
        "--no-symmetry",
        "--tol",
    ] {
        assert!(text.contains(flag), "missing {flag}");
    }
    assert!(kopt(&["--version"]).status.success());
}

#[test]
fn koptimal_second_order_has_exact_weights() {
    let v = json(&kopt(&["koptimal", "--order", "2", "--q", "3"]));
    let exact: Vec<&str> = v["weights_exact"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w.as_str().unwrap())
        .collect();
    assert_eq!(
        exact,
        ["17/99", "17/99", "17/99", "16/99", "16/99", "16/99"]
    );
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
}

#[test]
fn table_csv_layout() {
    let text = stdout(&kopt(&["table", "--qmax", "10", "--format", "csv"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,r1,n1,n1r1,r2,n2,n2r2,total_points");
    assert_eq!(lines.len(), 9);
    assert_eq!(
        lines[1],
        "3,0.1717171717,3,0.5151515152,0.1616161616,3,0.4848484848,6"
    );
    assert!(!text.contains('\r'));
    let text = stdout(&kopt(&["table", "--qmax", "10", "--format", "text"]));
    assert!(text.contains("73/1450"));
}

#[test]
fn singular_design_reports_infinite_kappa() {
    let d = r#"{"q":3,"points":[[1,0,0],[0,1,0],[0,0,1],[0.5,0.5,0],[0.5,0,0.5]]}"#;
    let v = json(&kopt_stdin(
        &["evaluate", "--design", "-", "--order", "2"],
        d,
    ));
    assert_eq!(v["kappa"], "inf");
    assert_eq!(v["p"], 6);
}

#[test]
fn exit_codes_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{nope");
    let o = kopt(&["evaluate", "--design", &bad, "--order", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error: malformed JSON"), "{err}");
    assert_eq!(err.lines().count(), 1);

    let design = write(
        dir.path(),
        "d.json",
        r#"{"q":3,"points":[[1,0,0],[0,1,0],[0,0,1]]}"#,
    );
    let bounds = write(dir.path(), "b.json", r#"{"upper":[0.3,0.3,0.3]}"#);
    let o = kopt(&[
        "transform",
        "--design",
        &design,
        "--bounds",
        &bounds,
        "--direction",
        "to-pseudo-upper",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .starts_with("error: infeasible bounds"));

    let bounds4 = write(dir.path(), "b4.json", r#"{"upper":[0.5,0.5,0.5,0.5]}"#);
    let o = kopt(&[
        "transform",
        "--design",
        &design,
        "--bounds",
        &bounds4,
        "--direction",
        "to-pseudo-upper",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .starts_with("error: dimension mismatch"));

    assert_eq!(kopt(&["lattice", "--q", "3"]).status.code(), Some(2));
    assert_eq!(
        kopt(&["koptimal", "--order", "3", "--q", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kopt(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        kopt(&["table", "--qmax", "4", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kopt(&["koptimal", "--order", "2", "--q", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn emitted_json_is_accepted_downstream() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["lattice", "--q", "3", "--m", "2"],
        vec!["centroid", "--q", "3"],
        vec!["koptimal", "--order", "2", "--q", "3"],
    ] {
        let d = stdout(&kopt(&args));
        let v = json(&kopt_stdin(
            &["evaluate", "--design", "-", "--order", "2"],
            &d,
        ));
        assert!(v["kappa"].is_number(), "{args:?}");

        let bounds = write(dir.path(), "b.json", r#"{"lower":[0.1,0.2,0.05]}"#);
        let fwd = stdout(&kopt_stdin(
            &[
                "transform",
                "--design",
                "-",
                "--bounds",
                &bounds,
                "--direction",
                "from-pseudo-lower",
            ],
            &d,
        ));
        let back = stdout(&kopt_stdin(
            &[
                "transform",
                "--design",
                "-",
                "--bounds",
                &bounds,
                "--direction",
                "to-pseudo-lower",
            ],
            &fwd,
        ));
        let a = kopt_core::io::parse_design(&d).unwrap();
        let b = kopt_core::io::parse_design(&back).unwrap();
        assert_eq!(a.exact_weights(), b.exact_weights());
        for (x, y) in a.points().iter().zip(b.points()) {
            assert!(x.max_distance(y) <= 1e-12);
        }
    }

    let support = stdout(&kopt(&["lattice", "--q", "3", "--m", "2"]));
    let opt = stdout(&kopt_stdin(
        &[
            "optimize",
            "--support",
            "-",
            "--order",
            "2",
            "--criterion",
            "k",
        ],
        &support,
    ));
    let v: serde_json::Value = serde_json::from_str(&opt).unwrap();
    assert_eq!(v["converged"], true);
    let m = json(&kopt_stdin(
        &["evaluate", "--design", "-", "--order", "2"],
        &opt,
    ));
    assert!((m["kappa"].as_f64().unwrap() - 65.98484500494129).abs() < 1e-6);
    let again = stdout(&kopt_stdin(
        &[
            "optimize",
            "--support",
            "-",
            "--order",
            "2",
            "--criterion",
            "d",
        ],
        &opt,
    ));
    let v: serde_json::Value = serde_json::from_str(&again).unwrap();
    for w in v["weights"].as_array().unwrap() {
        assert!((w.as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-6);
    }
}

#[test]
fn output_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let support = write(
        dir.path(),
        "s.json",
        &stdout(&kopt(&["lattice", "--q", "4", "--m", "2"])),
    );
    let run = |threads: &str| {
        stdout(&kopt(&[
            "--threads",
            threads,
            "optimize",
            "--support",
            &support,
            "--order",
            "2",
            "--criterion",
            "k",
            "--no-symmetry",
            "--multistarts",
            "6",
            "--seed",
            "7",
        ]))
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lattice.csv");
    let o = kopt(&[
        "lattice",
        "--q",
        "2",
        "--m",
        "2",
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), "x1,x2,weight\n1,0,0.3333333333333333\n0.5,0.5,0.3333333333333333\n0,1,0.3333333333333333\n");
}

#[test]
fn efficiency_report() {
    let v = json(&kopt(&["efficiency", "--q", "3"]));
    assert!((v["eff_d_of_k"].as_f64().unwrap() - 0.9995).abs() < 5e-4);
    assert!((v["eff_k_of_d"].as_f64().unwrap() - 0.9998).abs() < 5e-4);
}
