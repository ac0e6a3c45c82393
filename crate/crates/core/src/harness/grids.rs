//! Parameter grids and grid runners.

use super::increasing::check_increasing;
use super::intersection::check_intersection;
use super::{check_threshold, scan_window, ConjectureReport, Status, DEFAULT_PMF_THRESHOLD};
use crate::distributions::{cdf, survival, FamilySpec, Outcome};
use crate::error::{Error, Result};
use crate::gtransform::g_transform;

/// A family grid plus the pmf truncation threshold its scans use.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub families: Vec<FamilySpec<f64>>,
    pub threshold: f64,
}

impl GridSpec {
    pub fn new(families: Vec<FamilySpec<f64>>, threshold: f64) -> Result<Self> {
        if families.is_empty() {
            return Err(Error::domain("GridSpec::new", "empty grid"));
        }
        check_threshold(threshold)?;
        Ok(GridSpec {
            families,
            threshold,
        })
    }

    /// Binomial grid: every n in 1..=50, then 60, 80, … up to `max_n`,
    /// crossed with p ∈ {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5} —
    /// covers the skewness regimes from near-symmetric to strongly skewed
    /// while staying within minutes of runtime.
    pub fn default_binomial(max_n: u64) -> Self {
        let ps = [0.01f64, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
        let mut ns: Vec<u64> = (1..=50.min(max_n)).collect();
        let mut n = 60;
        while n <= max_n {
            ns.push(n);
            n += 20;
        }
        let mut families = Vec::with_capacity(ns.len() * ps.len());
        for &n in &ns {
            for &p in &ps {
                families.push(FamilySpec::binomial(n, p).expect("static grid"));
            }
        }
        GridSpec {
            families,
            threshold: DEFAULT_PMF_THRESHOLD,
        }
    }

    /// Poisson grid: `points` log-spaced means in [lo, hi].
    pub fn default_poisson(points: usize, lo: f64, hi: f64) -> Self {
        let step = (hi / lo).ln() / (points - 1) as f64;
        let families = (0..points)
            .map(|i| FamilySpec::poisson(lo * (step * i as f64).exp()).expect("static grid"))
            .collect();
        GridSpec {
            families,
            threshold: DEFAULT_PMF_THRESHOLD,
        }
    }

    /// Geometric grid: log-spaced means over [0.1, 50] plus a handful of
    /// integral means, where P(M < μ) = 1 − (μ/(1+μ))^μ exceeds ½ and the
    /// lower crossing inequality fails outright.
    pub fn default_geometric() -> Self {
        let mut means: Vec<f64> = Vec::new();
        let (lo, hi, points) = (0.1f64, 50.0f64, 40usize);
        let step = (hi / lo).ln() / (points - 1) as f64;
        for i in 0..points {
            means.push(lo * (step * i as f64).exp());
        }
        means.extend_from_slice(&[0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0]);
        let families = means
            .into_iter()
            .map(|mu| FamilySpec::geometric(mu).expect("static grid"))
            .collect();
        GridSpec {
            families,
            threshold: DEFAULT_PMF_THRESHOLD,
        }
    }
}

/// One grid point's full scan report.
#[derive(Debug, Clone)]
pub struct GridEntry {
    pub spec: FamilySpec<f64>,
    pub report: ConjectureReport,
}

/// Reports for a whole grid, in deterministic grid order.
#[derive(Debug, Clone)]
pub struct GridReport {
    pub entries: Vec<GridEntry>,
}

impl GridReport {
    pub fn violation_count(&self) -> usize {
        self.entries.iter().map(|e| e.report.violations.len()).sum()
    }

    pub fn indeterminate_count(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.report.indeterminate.len())
            .sum()
    }

    pub fn status(&self) -> Status {
        if self.violation_count() == 0 {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Smallest crossing-position r over all records (NaN-free).
    pub fn min_r(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| e.report.records.iter().map(|r| r.r))
            .filter(|r| r.is_finite())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn run_intersection_grid(grid: &GridSpec) -> Result<GridReport> {
    let mut entries = Vec::with_capacity(grid.families.len());
    for spec in &grid.families {
        let report = check_intersection(spec, grid.threshold)?;
        entries.push(GridEntry {
            spec: spec.clone(),
            report,
        });
    }
    Ok(GridReport { entries })
}

pub fn run_increasing_grid(grid: &GridSpec) -> Result<GridReport> {
    let mut entries = Vec::with_capacity(grid.families.len());
    for spec in &grid.families {
        let report = check_increasing(spec, grid.threshold)?;
        entries.push(GridEntry {
            spec: spec.clone(),
            report,
        });
    }
    Ok(GridReport { entries })
}

/// Intersection over a Poisson mean grid; the theorem says every λ passes,
/// so any violation here is a defect (or a publishable counterexample).
pub fn check_theorem_poisson(lambdas: &[f64], threshold: f64) -> Result<GridReport> {
    let families = lambdas
        .iter()
        .map(|&l| FamilySpec::poisson(l))
        .collect::<Result<Vec<_>>>()?;
    run_intersection_grid(&GridSpec::new(families, threshold)?)
}

/// Tail-bound audit of one family over its scan window.
#[derive(Debug, Clone)]
pub struct ChernoffReport {
    pub spec: FamilySpec<f64>,
    /// max(exact tail − exp(−D)) over both sides; ≤ 0 when the bound holds
    /// exactly everywhere.
    pub max_excess: f64,
    /// |exact − bound| at the support boundaries that should be met with
    /// equality (lower end at m = 0, and m = n for bounded supports).
    pub boundary_gaps: Vec<(u64, f64)>,
}

/// Verify exp(−D) dominates the exact tails over the scan window:
/// P(M ≤ m) ≤ exp(−D) for m ≤ mean and P(M ≥ m) ≤ exp(−D) for m ≥ mean.
pub fn check_chernoff(spec: &FamilySpec<f64>, threshold: f64) -> Result<ChernoffReport> {
    let window = scan_window(spec, threshold)?;
    let mean = spec.mean();
    let mut max_excess = f64::NEG_INFINITY;
    for m in window.iter() {
        let d = g_transform(spec, Outcome::Count(m))?.div_nats;
        let bound = (-d).exp();
        if (m as f64) <= mean {
            let exact = cdf(spec, &Outcome::Count(m))?;
            max_excess = max_excess.max(exact - bound);
        }
        if (m as f64) >= mean {
            let exact = survival(spec, &Outcome::Count(m))?;
            max_excess = max_excess.max(exact - bound);
        }
    }
    let mut boundary_gaps = Vec::new();
    if window.lo == 0 {
        let d = g_transform(spec, Outcome::Count(0))?.div_nats;
        let exact = cdf(spec, &Outcome::Count(0))?;
        boundary_gaps.push((0, (exact - (-d).exp()).abs()));
    }
    if let Some(top) = spec.support_max() {
        if window.hi == top {
            let d = g_transform(spec, Outcome::Count(top))?.div_nats;
            let exact = survival(spec, &Outcome::Count(top))?;
            boundary_gaps.push((top, (exact - (-d).exp()).abs()));
        }
    }
    Ok(ChernoffReport {
        spec: spec.clone(),
        max_excess,
        boundary_gaps,
    })
}
