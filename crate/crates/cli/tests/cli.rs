//! End-to-end tests of the `gtrans` binary: the documented invocations,
//! the exit-code contract, and the CSV round-trip rule.

use gtrans_cli::{format_f64, reference_quantile};
use gtrans::harness::RefDist;
use std::process::{Command, Output};

fn gtrans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtrans"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn version_reports_library_and_schema() {
    let out = gtrans(&["--version"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("csv-schema 1"), "{text}");
    assert!(text.contains("core 0."), "{text}");
}

#[test]
fn qq_poisson_twenty_signed() {
    let out = gtrans(&["qq", "--poisson", "20", "--ref", "gaussian", "--stat", "signed-g"]);
    assert!(out.status.success(), "{out:?}");
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["p_cum", "ref_quantile", "stat_value", "lower", "upper"]);
    assert!(rows.len() > 30);
    let mut prev = f64::NEG_INFINITY;
    for row in &rows {
        let p_cum: f64 = row[0].parse().unwrap();
        let lower: f64 = row[3].parse().unwrap();
        let upper: f64 = row[4].parse().unwrap();
        assert!(p_cum > prev, "p_cum not strictly increasing");
        prev = p_cum;
        // the identity line crosses every step of this table
        assert!(lower <= p_cum && p_cum <= upper);
    }
}

#[test]
fn qq_binomial_forty_folded_steps_cross_near_midpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qq.csv");
    let out = gtrans(&[
        "qq",
        "--binomial",
        "40",
        "0.5",
        "--ref",
        "chisq1",
        "--stat",
        "g2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    let (_, rows) = parse_csv(&text);
    // first step sits at statistic 0 where the reference CDF is 0 (a
    // corner tie); every later step is crossed strictly, and the steps
    // carrying visible mass are crossed near their middles (the crossing
    // position drifts upward only in the far tail)
    for row in &rows[1..] {
        let p_cum: f64 = row[0].parse().unwrap();
        let lower: f64 = row[3].parse().unwrap();
        let upper: f64 = row[4].parse().unwrap();
        let r = (p_cum - lower) / (upper - lower);
        assert!(r > 0.0 && r < 1.0, "step missed: {row:?}");
        if upper - lower >= 0.01 {
            assert!((0.4..=0.7).contains(&r), "bulk step off-center: {row:?} r={r}");
        }
    }
}

#[test]
fn qq_degenerate_single_atom_window() {
    // a geometric mean this small leaves one outcome above the pmf cutoff
    let out = gtrans(&["qq", "--geometric", "1e-16", "--ref", "gaussian", "--stat", "signed-g"]);
    assert!(out.status.success(), "{out:?}");
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 1, "{rows:?}");
}

#[test]
fn qq_round_trip_recomputes_derived_column() {
    let out = gtrans(&["qq", "--poisson", "4", "--ref", "gaussian", "--stat", "signed-g"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (_, rows) = parse_csv(&text);
    for row in &rows {
        let p_cum: f64 = row[0].parse().unwrap();
        // ref_quantile is the derived column: recomputing it from the
        // parsed p_cum reproduces the emitted field byte-for-byte
        let recomputed = format_f64(reference_quantile(RefDist::Gaussian, p_cum));
        assert_eq!(recomputed, row[1], "p_cum = {p_cum}");
        // and re-serializing every parsed float is the identity
        for field in row {
            let x: f64 = field.parse().unwrap();
            assert_eq!(&format_f64(x), field);
        }
    }
}

#[test]
fn bounds_poisson_one_boundary_equality() {
    let out = gtrans(&["bounds", "--poisson", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["m", "side", "exact_tail", "bound"]);
    let first = rows
        .iter()
        .find(|r| r[0] == "0" && r[1] == "lower")
        .expect("m=0 row");
    let exact: f64 = first[2].parse().unwrap();
    let bound: f64 = first[3].parse().unwrap();
    assert!((exact - bound).abs() < 1e-15, "boundary equality");
    for row in &rows {
        let exact: f64 = row[2].parse().unwrap();
        let bound: f64 = row[3].parse().unwrap();
        assert!(exact <= bound + 1e-13);
    }
    // byte-exact re-serialization of the whole table
    let mut rebuilt = String::from("m,side,exact_tail,bound\n");
    for row in &rows {
        rebuilt.push_str(&format!(
            "{},{},{},{}\n",
            row[0],
            row[1],
            format_f64(row[2].parse().unwrap()),
            format_f64(row[3].parse().unwrap())
        ));
    }
    assert_eq!(rebuilt, text);
}

#[test]
fn check_intersection_default_poisson_grid_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("check.csv");
    let out = gtrans(&[
        "check",
        "intersection",
        "--poisson-grid",
        "default",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    let (_, rows) = parse_csv(&text);
    assert!(rows.is_empty(), "no witnesses expected: {rows:?}");
}

#[test]
fn check_intersection_default_geometric_grid_fails_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("check.csv");
    let out = gtrans(&[
        "check",
        "intersection",
        "--geometric-grid",
        "default",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    let (_, rows) = parse_csv(&text);
    assert!(!rows.is_empty());
    let witness = rows.iter().find(|r| r[10] == "violation").expect("witness row");
    assert_eq!(witness[0], "geometric");
    let margin: f64 = witness[8].parse().unwrap();
    assert!(margin < 0.0);
}

#[test]
fn check_link_range_passes_with_tight_errors() {
    let out = gtrans(&["check", "link", "--m", "1..100", "--t", "default"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["m", "points", "max_tail_abs_err", "max_negation_abs_err"]);
    assert_eq!(rows.len(), 100);
    for row in &rows {
        let tail: f64 = row[2].parse().unwrap();
        let neg: f64 = row[3].parse().unwrap();
        assert!(tail < 1e-13 && neg < 1e-13, "{row:?}");
    }
}

#[test]
fn check_gamma_order_default_passes() {
    let out = gtrans(&["check", "gamma-order"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 7);
    for row in &rows {
        assert_eq!(row[3], "0", "violations column");
        let min_margin: f64 = row[2].parse().unwrap();
        assert!(min_margin >= -1e-12);
    }
}

#[test]
fn check_single_family_and_grid_file() {
    // single geometric family: violations dominate its m = μ tie, exit 2
    let out = gtrans(&["check", "intersection", "--geometric", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // grid file route
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("lambdas.txt");
    std::fs::write(&grid, "0.5\n2\n# comment\n7.5\n").unwrap();
    let out = gtrans(&["check", "intersection", "--poisson-grid", grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let bin_grid = dir.path().join("binoms.txt");
    std::fs::write(&bin_grid, "10 0.5\n25 0.1\n").unwrap();
    let out = gtrans(&["check", "increasing", "--binomial-grid", bin_grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn usage_errors_exit_one() {
    // missing family
    assert_eq!(gtrans(&["qq", "--ref", "gaussian", "--stat", "signed-g"]).status.code(), Some(1));
    // mismatched statistic/reference pairing
    assert_eq!(
        gtrans(&["qq", "--binomial", "40", "0.5", "--ref", "gaussian", "--stat", "g2"])
            .status
            .code(),
        Some(1)
    );
    // unknown check
    assert_eq!(gtrans(&["check", "bogus", "--poisson", "1"]).status.code(), Some(1));
    // unparseable flags
    assert_eq!(gtrans(&["qq", "--binomial", "x", "y", "--ref", "gaussian", "--stat", "signed-g"]).status.code(), Some(1));
    // missing grid file
    assert_eq!(
        gtrans(&["check", "intersection", "--poisson-grid", "/nonexistent/grid"]).status.code(),
        Some(1)
    );
    // invalid family parameter
    assert_eq!(gtrans(&["bounds", "--poisson", "-3"]).status.code(), Some(1));
}

#[test]
fn two_family_flags_rejected() {
    let out = gtrans(&["qq", "--poisson", "2", "--geometric", "1", "--ref", "gaussian", "--stat", "signed-g"]);
    assert_eq!(out.status.code(), Some(1));
}
