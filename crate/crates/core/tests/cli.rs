//! End-to-end tests of the `collision-cd` binary.

use std::process::{Command, Output};

use collision_cd::cli::output::{read_csv, CurveRecord, SweepRecord};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collision-cd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_report() {
    let out = run(&["analyze", "--norm", "5", "--sigma", "2.5", "--radius", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("median (CD)        4.286"), "{text}");
    assert!(text.contains("median (Bayes)     5.615"), "{text}");
    assert!(text.contains("[0.000, 8.629]"), "{text}");
    assert!(text.contains("[2.009, 9.566]"), "{text}");
}

#[test]
fn analyze_json_has_full_precision() {
    let out = run(&["analyze", "--y1", "3", "--y2", "4", "--sigma", "2.5", "--radius", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cd_at_radius"].as_f64().unwrap(), 0.2214950486);
    assert_eq!(v["interval_cd_lo_clipped"], serde_json::Value::Bool(true));
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["analyze", "--norm", "5", "--sigma", "0", "--radius", "2"],
        &["analyze", "--norm", "-1", "--sigma", "1", "--radius", "2"],
        &["analyze", "--norm", "5", "--sigma", "1", "--radius", "2", "--level", "1"],
        &["curve", "--norm", "5", "--sigma", "1", "--grid", "3:1:10"],
        &["sweep", "--n-reps", "0"],
        &["pit", "--delta-true", "2", "--sigma", "2.5", "--radius", "2", "--n", "99"],
        &["no-such-command"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn curve_rows_satisfy_marcum_identity() {
    let out = run(&["curve", "--norm", "5", "--sigma", "2.5", "--grid", "0:12:481"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<CurveRecord> = read_csv(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 481);
    let at_r = rows.iter().find(|r| r.delta == 2.0).unwrap();
    assert!((at_r.c - 0.2215).abs() < 1e-4);
    for r in &rows {
        let (a, b) = (r.delta / 2.5, 2.0);
        let term = (-0.5 * (a * a + b * b)).exp() * bessel_i0(a * b);
        // each column is rounded to 10 significant digits
        assert!((r.c - r.b - term).abs() < 1e-9, "{r:?}");
        assert!(r.c >= r.b);
        assert!((r.cc - (1.0 - 2.0 * r.c).abs()).abs() < 1e-9);
        assert!((r.cred - (1.0 - 2.0 * r.b).abs()).abs() < 1e-9);
    }
}

/// Plain power series, adequate for the small arguments used above.
fn bessel_i0(x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..200 {
        term *= (x / 2.0).powi(2) / (k * k) as f64;
        sum += term;
    }
    sum
}

#[test]
fn sweep_is_reproducible() {
    let args = ["sweep", "--n-reps", "2000", "--seed", "7", "--format", "csv"];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows: Vec<SweepRecord> = read_csv(&stdout(&a)).unwrap();
    assert_eq!(rows.len(), 7);
}

#[test]
fn sweep_single_replicate_is_finite() {
    let out = run(&["sweep", "--n-reps", "1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<SweepRecord> = read_csv(&stdout(&out)).unwrap();
    for r in rows {
        for v in [r.mean_bayes, r.mean_cd, r.freq_bayes, r.freq_cd, r.stderr_mean_bayes, r.stderr_mean_cd] {
            assert!(v.is_finite(), "{r:?}");
        }
    }
}

#[test]
fn config_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# defaults\nnorm = 5\nsigma = 1.0\nradius = 2\n").unwrap();
    let dest = dir.path().join("out.json");
    let out = run(&[
        "analyze",
        "--config",
        cfg.to_str().unwrap(),
        "--sigma",
        "2.5",
        "--format",
        "json",
        "-o",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["sigma"].as_f64().unwrap(), 2.5);
    assert_eq!(v["norm"].as_f64().unwrap(), 5.0);
}

#[test]
fn pit_histogram_counts_sum_to_n() {
    let out = run(&["pit", "--delta-true", "2", "--sigma", "2.5", "--radius", "2", "--n", "1000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let hist = v["histogram"].as_array().unwrap();
    assert_eq!(hist.len(), 20);
    let total: u64 = hist.iter().map(|h| h["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 1000);
}
