use std::process::{Command, Output};

fn symsense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symsense")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Value of `column` in the first data row of the first CSV table.
fn field(csv: &str, column: &str) -> String {
    let mut lines = csv.lines();
    let head: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = head.iter().position(|h| *h == column).unwrap_or_else(|| panic!("no column {column}"));
    row[i].to_string()
}

#[test]
fn qfi_example_from_decimal_scale() {
    let o = symsense(&["qfi", "--g", "21", "--n", "43", "--u", "1.0233", "--s", "21"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "N"), "945");
    assert_eq!(field(&out, "qfi_closed_form"), "18963");
    let numeric: f64 = field(&out, "qfi_numeric").parse().unwrap();
    assert!((numeric - 18963.0).abs() < 1e-6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("924"));
}

#[test]
fn invalid_configuration_exits_with_two() {
    for args in [
        vec!["qfi", "--g", "0", "--n", "3"],
        vec!["qfi", "--g", "3", "--n", "3", "--u", "7/5"],
        vec!["delete", "--g", "3", "--n", "3", "--t", "20"],
        vec!["polytope", "--q", "1/2"],
        vec!["protocol1", "--g", "3", "--n", "5", "--trials", "10"],
    ] {
        let o = symsense(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verify_passes() {
    let o = symsense(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains(",false,"));
}

#[test]
fn protocol_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |sub: &str| {
        vec![
            "protocol1".to_string(),
            "--g".into(),
            "3".into(),
            "--n".into(),
            "3".into(),
            "--nq".into(),
            "60".into(),
            "--ndel".into(),
            "0.01".into(),
            "--trials".into(),
            "500".into(),
            "--seed".into(),
            "7".into(),
            "--trajectories".into(),
            "--out".into(),
            dir.path().join(sub).display().to_string(),
        ]
    };
    let run = |sub: &str, threads: &str| {
        let a = args(sub);
        let o =
            Command::new(env!("CARGO_BIN_EXE_symsense")).args(&a).env("SYMSENSE_THREADS", threads).output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run("a", "1");
    run("b", "4");
    for file in ["protocol1.csv", "trajectories.jsonl"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs across thread counts");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["command"], "protocol1");
    assert!(manifest["git_describe"].is_string());
}

#[test]
fn fqec_scan_matches_exponent_formula() {
    let o = symsense(&["fqec-scan", "--q", "1,1.5", "--e1", "0.05", "--e2", "0.02", "--c-grid", "0:0.5:0.1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut rows = 0;
    for line in out.lines().skip(1) {
        let v: Vec<f64> = line.split(',').take(5).map(|x| x.parse().unwrap()).collect();
        let (q, c, e1, e2) = (v[0], v[1], 0.05, 0.02);
        let expected =
            (4.0 * c * (q + 2.0) - 5.0 * e1 * (q + 1.0) - 2.0 * (e2 - 1.0) * (2.0 * q - 1.0)) / (4.0 * q + 3.0);
        assert!((v[4] - expected).abs() < 1e-12, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 12);
}

#[test]
fn json_format_emits_numbers() {
    let o = symsense(&["--format", "json", "protocol3", "--k", "3"]);
    assert!(o.status.success());
    let first: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["j"], 1);
    assert_eq!(first["c_j_exact"], "1/2");
}

#[test]
fn polytope_reports_empty_region() {
    let o = symsense(&["polytope", "--c", "1", "--q", "1", "--eta", "0", "--e1", "1", "--e2", "1", "--steps", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\nfalse,"));
}
