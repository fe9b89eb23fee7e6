use std::process::{Command, Output};

fn lgi_pt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgi-pt"))
        .args(args)
        .env_remove("LGI_PT_THREADS")
        .output()
        .expect("run lgi-pt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn corr_prints_tsirelson_value() {
    let o = lgi_pt(&["corr", "--alpha", "0", "--tau", "0.5235987755982988"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[5] - 1.5).abs() < 1e-12, "{text}");
}

#[test]
fn quarter_prints_thirteen_sixths() {
    let o = lgi_pt(&["quarter", "--alpha", "0.7853981633974483"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[4] + 1.0).abs() < 1e-12);
    assert!((row[5] - 13.0 / 6.0).abs() < 1e-12);
}

#[test]
fn verify_full_run_exits_zero() {
    let o = lgi_pt(&[
        "verify",
        "--samples",
        "10000",
        "--seed",
        "7",
        "--tol",
        "1e-9",
    ]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("closed-repaired: max|closed-sim|="));
    assert!(text.contains("closed-printed: max|closed-sim|="));
    assert!(text.trim_end().ends_with("result=PASS"));
}

#[test]
fn validation_errors_use_stderr_and_exit_two() {
    for args in [
        &["corr", "--alpha", "0.5pi", "--tau", "1"][..],
        &["sweep", "--alpha", "0", "--steps", "1"],
        &["sweep", "--alpha", "0", "--nope"],
        &["frobnicate"],
    ] {
        let o = lgi_pt(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn output_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    let o = lgi_pt(&[
        "sweep",
        "--alpha",
        "0.1,0.2",
        "--steps",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0]["tau"].as_f64().unwrap(), 0.0);
    assert!((rows[4]["tau"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn unwritable_output_is_runtime_error() {
    let o = lgi_pt(&["quarter", "--alpha", "0", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/x.csv"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "sweep", "--alpha", "0,0.3pi", "--steps", "40", "--method", "sim",
    ];
    let baseline = lgi_pt(&args).stdout;
    for threads in ["1", "3"] {
        let o = Command::new(env!("CARGO_BIN_EXE_lgi-pt"))
            .args(args)
            .env("LGI_PT_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        assert_eq!(o.stdout, baseline);
    }
    let o = Command::new(env!("CARGO_BIN_EXE_lgi-pt"))
        .args(args)
        .env("LGI_PT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn k3max_reports_near_algebraic_maximum() {
    let o = lgi_pt(&["k3max", "--alpha", "0.499pi"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "alpha,k3_max,tau_min_arg");
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(row[1] >= 2.99);
    assert!((row[2] - std::f64::consts::FRAC_PI_4).abs() < 0.01);
}

#[test]
fn eigen_reports_spectrum() {
    let o = lgi_pt(&["eigen", "--alpha", "0.25pi", "--s", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let field = |k: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{k}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((field("e_plus") - 2f64.sqrt()).abs() < 1e-14);
    assert!((field("normalized_overlap") - 0.5f64.sqrt()).abs() < 1e-14);
    assert!(field("pt_defect") < 1e-13);
}
