//! End-to-end checks of the `qrecycle` binary: exit codes, CSV shapes,
//! and determinism. Each case spawns the built binary the way a shell
//! user would.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrecycle"))
        .args(args)
        .output()
        .expect("spawn qrecycle")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("stderr is UTF-8")
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qrecycle-cli-{}-{name}", std::process::id()))
}

/// `{:.16e}` renders 17 significant digits: d.16 digits, e, exponent.
fn is_full_precision(field: &str) -> bool {
    let s = field.strip_prefix('-').unwrap_or(field);
    let Some((mantissa, _exp)) = s.split_once('e') else {
        return false;
    };
    let Some((head, frac)) = mantissa.split_once('.') else {
        return false;
    };
    head.len() == 1 && frac.len() == 16
}

#[test]
fn precision_pass_writes_csv_and_exits_zero() {
    let o = run(&["precision", "--kernel", "q77", "--grid", "1e-6:37:2001:log"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let out = stdout(&o);
    assert!(!out.contains('\r'), "CSV must be LF-only");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("input,approx,oracle,rel_error"));
    let first = lines.next().expect("at least one data row");
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields.len(), 4);
    for f in &fields {
        assert!(is_full_precision(f), "field {f} is not 17-significant-digit float");
    }
    assert_eq!(out.lines().count(), 2002, "header plus one row per grid point");
    // Summary goes to stderr, not into the CSV stream.
    assert!(stderr(&o).contains("max rel"), "stderr: {}", stderr(&o));
}

#[test]
fn precision_bound_violation_exits_one() {
    // Past v = 50 the (7,7) kernel drifts beyond its documented bound.
    let o = run(&["precision", "--kernel", "q77", "--grid", "37:74:500"]);
    assert_eq!(o.status.code(), Some(1), "stderr: {}", stderr(&o));
    // The sweep itself still completes and reports.
    assert!(stdout(&o).starts_with("input,approx,oracle,rel_error"));
}

#[test]
fn precision_usage_errors_exit_two() {
    let bad_kernel = run(&["precision", "--kernel", "nosuch", "--grid", "1:2:10"]);
    assert_eq!(bad_kernel.status.code(), Some(2));

    let bad_grid = run(&["precision", "--kernel", "q77", "--grid", "5:1:10"]);
    assert_eq!(bad_grid.status.code(), Some(2));

    let out_of_domain = run(&["precision", "--kernel", "icnd_double", "--grid", "0:2:10"]);
    assert_eq!(out_of_domain.status.code(), Some(2));

    let unwritable = run(&[
        "precision",
        "--kernel",
        "q77",
        "--grid",
        "1:2:10",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(2));
}

#[test]
fn qqmap_emits_map_with_identity_column() {
    let o = run(&[
        "qqmap",
        "--base",
        "gaussian",
        "--target",
        "student",
        "--params",
        "n=4",
        "--grid",
        "-5:5:11",
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("v,q,identity"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    for r in &rows {
        assert_eq!(r.len(), 3);
        assert_eq!(r[0], r[2], "identity column repeats the abscissa");
    }
    assert_eq!(rows[0][0], -5.0);
    assert_eq!(rows[10][0], 5.0);
    // Student t has heavier tails: above the diagonal on the right.
    assert!(rows[10][1] > 5.0);
    // Odd map: centre row is (0, 0, 0).
    assert_eq!(rows[5][0], 0.0);
    assert!(rows[5][1].abs() < 1e-12);
    assert!(stderr(&o).contains("solved"), "stderr: {}", stderr(&o));
}

#[test]
fn qqmap_pairs_and_failure_modes() {
    // Exponential base to normal target needs a nonnegative grid.
    let ok = run(&["qqmap", "--base", "exp", "--target", "normal", "--grid", "0:5:6"]);
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", stderr(&ok));

    let neg = run(&["qqmap", "--base", "exp", "--target", "normal", "--grid", "-1:5:6"]);
    assert_eq!(neg.status.code(), Some(2));

    // Unsupported pair.
    let unsup = run(&["qqmap", "--base", "gaussian", "--target", "vg", "--grid", "-1:1:5"]);
    assert_eq!(unsup.status.code(), Some(2));

    // Unsupported distribution parameters (shape below one).
    let vg_low = run(&[
        "qqmap",
        "--base",
        "exp",
        "--target",
        "vg",
        "--params",
        "lambda=0.5",
        "--grid",
        "-1:1:5",
    ]);
    assert_eq!(vg_low.status.code(), Some(2));

    // A solve that blows up mid-flight (Student far past any usable depth)
    // is an ODE failure, distinct from argument errors.
    let blowup = run(&[
        "qqmap",
        "--base",
        "gaussian",
        "--target",
        "student",
        "--params",
        "n=4",
        "--grid",
        "-40:40:5",
    ]);
    assert_eq!(blowup.status.code(), Some(1), "stderr: {}", stderr(&blowup));
    assert!(stderr(&blowup).contains("ODE failure"), "stderr: {}", stderr(&blowup));
}

#[test]
fn qqmap_two_sided_targets_solve() {
    let hyp = run(&[
        "qqmap",
        "--base",
        "exp",
        "--target",
        "hyperbolic",
        "--params",
        "alpha=1,beta=0,delta=1",
        "--grid",
        "-3:3:7",
        "--step",
        "2e-3",
    ]);
    assert_eq!(hyp.status.code(), Some(0), "stderr: {}", stderr(&hyp));
    assert_eq!(stdout(&hyp).lines().count(), 8);

    let vg = run(&[
        "qqmap",
        "--base",
        "exp",
        "--target",
        "vg",
        "--params",
        "lambda=2,alpha=1,beta=0",
        "--grid",
        "-3:3:7",
        "--step",
        "2e-3",
    ]);
    assert_eq!(vg.status.code(), Some(0), "stderr: {}", stderr(&vg));
}

#[test]
fn bench_is_deterministic_per_seed_and_writes_csv() {
    let path = tmp("bench.csv");
    let args = [
        "bench",
        "--kernel",
        "q77",
        "--n-samples",
        "1000000",
        "--reps",
        "2",
        "--seed",
        "42",
        "--out",
        path.to_str().unwrap(),
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "stderr: {}", stderr(&a));
    assert!(stdout(&a).contains("ns/call"), "table on stdout");
    let csv_a = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv_a.lines();
    assert_eq!(
        lines.next(),
        Some("kernel,net_ns_per_call,baseline_ns_per_call,rel_cost,cv,checksum")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "q77");
    let checksum_a: f64 = row[5].parse().unwrap();
    assert!(checksum_a.is_finite() && checksum_a != 0.0);

    // Same seed, same draws, bit-identical checksum; timings may differ.
    let b = run(&args);
    assert_eq!(b.status.code(), Some(0));
    let csv_b = std::fs::read_to_string(&path).unwrap();
    let checksum_b: f64 = csv_b.lines().nth(1).unwrap().split(',').nth(5).unwrap().parse().unwrap();
    assert_eq!(checksum_a.to_bits(), checksum_b.to_bits());
    let _ = std::fs::remove_file(&path);
}

#[test]
fn bench_usage_errors_exit_two() {
    let small = run(&["bench", "--kernel", "q77", "--n-samples", "1000"]);
    assert_eq!(small.status.code(), Some(2));
    let unknown = run(&["bench", "--kernel", "warp-drive", "--n-samples", "1000000"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn out_files_match_stdout_stream() {
    let path = tmp("precision.csv");
    let to_file = run(&[
        "precision",
        "--kernel",
        "tail",
        "--grid",
        "37:1000:50:log",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(to_file.status.code(), Some(0), "stderr: {}", stderr(&to_file));
    let from_file = std::fs::read_to_string(&path).unwrap();
    let to_stdout = run(&["precision", "--kernel", "tail", "--grid", "37:1000:50:log"]);
    assert_eq!(from_file, stdout(&to_stdout));
    let _ = std::fs::remove_file(&path);
}
