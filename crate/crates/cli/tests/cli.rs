use std::process::{Command, Output};

fn menon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_menon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compute_prints_exact_values() {
    for (args, expected) in [
        (&["compute", "mbar", "--n", "6"][..], "320\n"),
        (&["compute", "fk", "--n", "5", "--k", "1"][..], "1\n"),
        (&["compute", "mbark", "--n", "4", "--k", "2"][..], "20\n"),
        (&["compute", "menon", "--n", "12"][..], "24\n"),
        (&["compute", "phik", "--n", "4", "--k", "2"][..], "5\n"),
    ] {
        let out = menon(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(stdout(&out), expected, "{args:?}");
    }
    let theorem = menon(&["compute", "mbar", "--n", "64", "--strategy", "theorem"]);
    let special = menon(&["compute", "mbar", "--n", "64", "--strategy", "prime-power"]);
    assert!(special.status.success());
    assert_eq!(stdout(&theorem), stdout(&special));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["compute", "fk", "--n", "5"][..],
        &["compute", "f", "--n", "0"][..],
        &["compute", "f", "--n", "5", "--k", "2"][..],
        &["compute", "mbar", "--n", "12", "--strategy", "prime-power"][..],
        &["compute", "f", "--n", "5", "--strategy", "theorem"][..],
        &["compute", "nope", "--n", "5"][..],
        &[
            "table",
            "f",
            "--n-max",
            "3",
            "--out",
            "/nonexistent-dir/x.csv",
        ][..],
        &["bench", "mbar", "--n", "12", "--strategies", "prime-power"][..],
        &["verify", "--n-max-enum", "40"][..],
    ] {
        let out = menon(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn csv_tables() {
    let out = menon(&["table", "f", "--n-max", "6", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,value\n1,1\n2,2\n3,5\n4,11\n5,26\n6,53\n");
    let out = menon(&["table", "phi", "--n-max", "1"]);
    assert_eq!(stdout(&out), "n,value\n1,1\n");
}

#[test]
fn json_table_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mbark.json");
    let out = menon(&[
        "table",
        "mbark",
        "--k",
        "2",
        "--n-max",
        "6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["function"], "mbark");
    assert_eq!(v["k"], 2);
    let values: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["0", "2", "9", "20", "46", "66"]);
}

#[test]
fn output_is_deterministic() {
    let a = menon(&["table", "mbar", "--n-max", "80", "--format", "json"]);
    let b = menon(&["table", "mbar", "--n-max", "80", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_defaults_pass() {
    let out = menon(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed: PASS"));
}

#[test]
fn verify_json_report() {
    let out = menon(&[
        "verify",
        "--n-max-enum",
        "2",
        "--n-max-formula",
        "20",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["overall"], true);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"mbar(2) = 4"));
}

#[test]
fn corrupted_sieve_exits_1() {
    let out = menon(&[
        "verify",
        "--n-max-enum",
        "6",
        "--n-max-formula",
        "40",
        "--corrupt-mu-at",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL]"));
}

#[test]
fn bench_strategies_agree() {
    let out = menon(&["bench", "mbar", "--n", "210", "--strategies", "theorem"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("theorem") && text.contains("gcd-class"),
        "{text}"
    );

    let out = menon(&[
        "bench",
        "mbar",
        "--n",
        "64",
        "--strategies",
        "theorem,prime-power",
    ]);
    assert!(out.status.success());

    let out = menon(&[
        "bench",
        "f",
        "--n",
        "5000",
        "--strategies",
        "direct,blocked",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("blocked"));
}
