//! Table construction, CSV rendering, and exit-code policy behind the
//! `gtrans` command-line tool.
//!
//! Everything here is deterministic: grids run in declared order, CSV
//! floats use Rust's shortest round-trip decimal formatting (up to 17
//! significant digits, `.` decimal separator), and parsing a written file
//! back recovers bit-identical values.

use gtrans::distributions::{cdf, survival, FamilySpec, Outcome};
use gtrans::error::{Error, Result};
use gtrans::gtransform::g_transform;
use gtrans::harness::{
    check_gamma_ordering, check_increasing, check_intersection, default_link_factors,
    default_shape_grid, default_t_grid, run_link_grid, statistic_atoms, ConjectureReport,
    GridSpec, RefDist, StatKind, Violation, DEFAULT_PMF_THRESHOLD,
};
use gtrans::specfun::std_normal_quantile;

/// CSV schema version, reported through `--version`.
pub const SCHEMA_VERSION: &str = "1";

/// Showcase n for the symmetric binomial Q-Q table; the half-integer
/// figures all use moderate n of this order.
pub const DEFAULT_QQ_BINOMIAL_N: u64 = 40;

// ---------------------------------------------------------------------------
// Float formatting
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal for a float; `parse::<f64>()` of the output
/// recovers the exact bits. Infinities render as `inf`/`-inf`.
pub fn format_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

/// A rendered CSV: header plus rows of already-formatted fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: Vec<&'static str>) -> Self {
        Csv {
            header,
            rows: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Family tag and up to two parameter columns for CSV rows.
pub fn family_columns(spec: &FamilySpec<f64>) -> (&'static str, String, String) {
    match spec {
        FamilySpec::Binomial { n, p } => ("binomial", n.to_string(), format_f64(*p)),
        FamilySpec::Poisson { lambda } => ("poisson", format_f64(*lambda), String::new()),
        FamilySpec::GammaShape { shape } => ("gamma", format_f64(*shape), String::new()),
        FamilySpec::Geometric { mu } => ("geometric", format_f64(*mu), String::new()),
        FamilySpec::PoissonBinomial { probs } => (
            "poisson-binomial",
            probs
                .iter()
                .map(|p| format_f64(*p))
                .collect::<Vec<_>>()
                .join("|"),
            String::new(),
        ),
    }
}

// ---------------------------------------------------------------------------
// Q-Q tables
// ---------------------------------------------------------------------------

/// One step of a Q-Q table.
///
/// `p_cum` is the reference CDF at the statistic value — the height at
/// which the identity line meets this step — and `ref_quantile` is the
/// reference quantile back at `p_cum`. `lower`/`upper` are the step's
/// endpoints in probability space, so `lower ≤ p_cum ≤ upper` holds
/// exactly when the identity line crosses the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QqRow {
    pub p_cum: f64,
    pub ref_quantile: f64,
    pub stat_value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Reference quantile with saturated tails: probabilities that round to 0
/// or 1 in doubles map to the infinite quantile endpoints.
pub fn reference_quantile(reference: RefDist, p: f64) -> f64 {
    match reference {
        RefDist::Gaussian => {
            if p <= 0.0 {
                f64::NEG_INFINITY
            } else if p >= 1.0 {
                f64::INFINITY
            } else {
                std_normal_quantile(p).expect("p inside (0,1)")
            }
        }
        RefDist::ChiSq1 => {
            if p <= 0.0 {
                0.0
            } else if p >= 1.0 {
                f64::INFINITY
            } else {
                let z = std_normal_quantile(0.5 * (1.0 + p)).expect("folded p inside (0,1)");
                z * z
            }
        }
    }
}

/// Build the Q-Q table for a discrete family (or a sampled curve for the
/// Gamma family, where the steps collapse to points with lower = upper).
pub fn qq_table(
    spec: &FamilySpec<f64>,
    kind: StatKind,
    reference: RefDist,
    threshold: f64,
) -> Result<Vec<QqRow>> {
    if let FamilySpec::GammaShape { shape } = spec {
        if kind != StatKind::SignedG {
            return Err(Error::Domain {
                op: "qq_table",
                detail: "the Gamma family pairs with the signed statistic only".into(),
            });
        }
        let mut rows = Vec::new();
        for t in default_t_grid(*shape, 512) {
            let z = g_transform(spec, Outcome::Time(t))?.z;
            let p_cum = gtrans::specfun::std_normal_cdf(z);
            let c = cdf(spec, &Outcome::Time(t))?;
            rows.push(QqRow {
                p_cum,
                ref_quantile: reference_quantile(RefDist::Gaussian, p_cum),
                stat_value: z,
                lower: c,
                upper: c,
            });
        }
        return Ok(rows);
    }
    let (atoms, _) = statistic_atoms(spec, kind, reference, threshold)?;
    Ok(atoms
        .iter()
        .map(|a| QqRow {
            p_cum: a.ref_cdf,
            ref_quantile: reference_quantile(reference, a.ref_cdf),
            stat_value: a.stat,
            lower: a.lower,
            upper: a.upper,
        })
        .collect())
}

pub fn qq_csv(rows: &[QqRow]) -> Csv {
    let mut csv = Csv::new(vec!["p_cum", "ref_quantile", "stat_value", "lower", "upper"]);
    for r in rows {
        csv.rows.push(vec![
            format_f64(r.p_cum),
            format_f64(r.ref_quantile),
            format_f64(r.stat_value),
            format_f64(r.lower),
            format_f64(r.upper),
        ]);
    }
    csv
}

// ---------------------------------------------------------------------------
// Bound curves
// ---------------------------------------------------------------------------

/// One row of an exp(−D) bound curve: the exact tail on the stated side
/// never exceeds `bound` (+1e-13 of slack for the comparison).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub m: u64,
    pub side: &'static str,
    pub exact_tail: f64,
    pub bound: f64,
}

/// Both-sided bound curve over the scan window; at the mean both rows
/// appear with bound 1.
pub fn bound_curve(spec: &FamilySpec<f64>, threshold: f64) -> Result<Vec<BoundRow>> {
    if !spec.is_discrete() {
        return Err(Error::Domain {
            op: "bound_curve",
            detail: "bound curves are tabulated for discrete families".into(),
        });
    }
    let window = gtrans::harness::scan_window(spec, threshold)?;
    let mean = spec.mean();
    let mut rows = Vec::with_capacity(window.len() + 1);
    for m in window.iter() {
        let d = g_transform(spec, Outcome::Count(m))?.div_nats;
        let bound = (-d).exp();
        if (m as f64) <= mean {
            rows.push(BoundRow {
                m,
                side: "lower",
                exact_tail: cdf(spec, &Outcome::Count(m))?,
                bound,
            });
        }
        if (m as f64) >= mean {
            rows.push(BoundRow {
                m,
                side: "upper",
                exact_tail: survival(spec, &Outcome::Count(m))?,
                bound,
            });
        }
    }
    Ok(rows)
}

pub fn bounds_csv(rows: &[BoundRow]) -> Csv {
    let mut csv = Csv::new(vec!["m", "side", "exact_tail", "bound"]);
    for r in rows {
        csv.rows.push(vec![
            r.m.to_string(),
            r.side.to_string(),
            format_f64(r.exact_tail),
            format_f64(r.bound),
        ]);
    }
    csv
}

// ---------------------------------------------------------------------------
// Check runners
// ---------------------------------------------------------------------------

/// Verification outcome, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOutcome {
    pub violations: usize,
    pub indeterminate: usize,
}

impl CheckOutcome {
    /// 0 = all pass; 2 = violations found; 3 = indeterminate-only
    /// findings. (1 is reserved for usage and convergence errors.)
    pub fn exit_code(&self) -> u8 {
        if self.violations > 0 {
            2
        } else if self.indeterminate > 0 {
            3
        } else {
            0
        }
    }
}

/// A finished check: human summary lines, the witness/summary CSV, and
/// the outcome.
#[derive(Debug, Clone)]
pub struct CheckRun {
    pub summary: Vec<String>,
    pub csv: Csv,
    pub outcome: CheckOutcome,
}

fn finding_row(
    spec: &FamilySpec<f64>,
    report: &ConjectureReport,
    v: &Violation,
    flag: &str,
) -> Vec<String> {
    let (family, p1, p2) = family_columns(spec);
    let (lower, mid, upper, r) = report
        .records
        .iter()
        .find(|rec| rec.m == v.m)
        .map(|rec| (rec.lower, rec.mid, rec.upper, rec.r))
        .unwrap_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN));
    vec![
        family.to_string(),
        p1,
        p2,
        v.m.to_string(),
        v.side.to_string(),
        format_f64(lower),
        format_f64(mid),
        format_f64(upper),
        format_f64(v.margin),
        format_f64(r),
        flag.to_string(),
    ]
}

const FINDING_HEADER: [&str; 11] = [
    "family", "param1", "param2", "m", "side", "lower", "mid", "upper", "margin", "r", "flag",
];

/// Step-crossing scan over a grid (strict inequalities per outcome).
pub fn run_intersection(grid: &GridSpec) -> Result<CheckRun> {
    run_conjecture(grid, "intersection", check_intersection)
}

/// Ratio-monotonicity scan over a grid.
pub fn run_increasing(grid: &GridSpec) -> Result<CheckRun> {
    run_conjecture(grid, "increasing", check_increasing)
}

fn run_conjecture(
    grid: &GridSpec,
    what: &str,
    check: impl Fn(&FamilySpec<f64>, f64) -> Result<ConjectureReport>,
) -> Result<CheckRun> {
    let mut csv = Csv::new(FINDING_HEADER.to_vec());
    let mut violations = 0;
    let mut indeterminate = 0;
    let mut summary = Vec::new();
    for spec in &grid.families {
        let report = check(spec, grid.threshold)?;
        violations += report.violations.len();
        indeterminate += report.indeterminate.len();
        for v in &report.violations {
            csv.rows.push(finding_row(spec, &report, v, "violation"));
        }
        for v in &report.indeterminate {
            csv.rows
                .push(finding_row(spec, &report, v, "indeterminate"));
        }
        if !report.violations.is_empty() {
            let (family, p1, p2) = family_columns(spec);
            summary.push(format!(
                "FAIL {what} {family}({p1}{}{p2}): {} violation(s), first at m={}",
                if p2.is_empty() { "" } else { "," },
                report.violations.len(),
                report.violations[0].m
            ));
        }
    }
    summary.push(format!(
        "{what}: {} famil{} scanned, {violations} violation(s), {indeterminate} indeterminate",
        grid.families.len(),
        if grid.families.len() == 1 { "y" } else { "ies" },
    ));
    Ok(CheckRun {
        summary,
        csv,
        outcome: CheckOutcome {
            violations,
            indeterminate,
        },
    })
}

/// Gamma stochastic-ordering scan: one CSV row per shape.
pub fn run_gamma_order(shapes: &[f64], points: usize) -> Result<CheckRun> {
    let mut csv = Csv::new(vec!["shape", "points", "min_margin", "violations"]);
    let mut violations = 0;
    for &shape in shapes {
        let grid = default_t_grid(shape, points);
        let report = check_gamma_ordering(shape, &grid)?;
        violations += report.violations.len();
        csv.rows.push(vec![
            format_f64(shape),
            grid.len().to_string(),
            format_f64(report.min_margin()),
            report.violations.len().to_string(),
        ]);
    }
    let summary = vec![format!(
        "gamma-order: {} shape(s) × {points} t-points, {violations} violation(s)",
        shapes.len()
    )];
    Ok(CheckRun {
        summary,
        csv,
        outcome: CheckOutcome {
            violations,
            indeterminate: 0,
        },
    })
}

/// Waiting-time duality scan: one CSV row per m with the worst absolute
/// errors across its t grid.
pub fn run_link(ms: &[u64], factors: &[f64]) -> Result<CheckRun> {
    let mut csv = Csv::new(vec!["m", "points", "max_tail_abs_err", "max_negation_abs_err"]);
    let mut violations = 0;
    let mut worst_tail = 0.0f64;
    let mut worst_neg = 0.0f64;
    for &m in ms {
        let report = run_link_grid(&[m], factors)?;
        if !report.pass() {
            violations += 1;
        }
        worst_tail = worst_tail.max(report.max_tail_gap);
        worst_neg = worst_neg.max(report.max_negation_gap);
        csv.rows.push(vec![
            m.to_string(),
            factors.len().to_string(),
            format_f64(report.max_tail_gap),
            format_f64(report.max_negation_gap),
        ]);
    }
    let summary = vec![format!(
        "link: {} m-values × {} t-points, max tail err {:.3e}, max negation err {:.3e}, {violations} over tolerance",
        ms.len(),
        factors.len(),
        worst_tail,
        worst_neg
    )];
    Ok(CheckRun {
        summary,
        csv,
        outcome: CheckOutcome {
            violations,
            indeterminate: 0,
        },
    })
}

/// Default multiplier grid for the link check.
pub fn link_default_factors() -> Vec<f64> {
    default_link_factors(50)
}

/// Default shapes for the ordering check.
pub fn gamma_order_default_shapes() -> Vec<f64> {
    default_shape_grid()
}

/// The default pmf threshold re-exported for the binary.
pub const THRESHOLD: f64 = DEFAULT_PMF_THRESHOLD;
