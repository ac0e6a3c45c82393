//! Grid-scanning verification of the step-function properties.
//!
//! The quantile transform between a discrete G(M) and a standard Gaussian
//! is a step function; these checks measure, for every outcome in a scan
//! window, whether the identity line crosses each step strictly
//! (intersection property), whether the pmf-to-Gaussian-cell ratios are
//! monotone (increasing property), the Gamma stochastic ordering, the
//! Poisson–Gamma waiting-time duality, and the exp(−D) tail bounds.
//!
//! All probability comparisons are carried out on whichever tail is small
//! (CDF space below the mean, survival space above), with window CDFs
//! evaluated through a compensated tail table so adjacent values stay
//! consistent with the pmf to machine precision; an inequality within
//! [`TIE_EPS`] of equality is
//! reported as indeterminate rather than as a violation, because doubles
//! cannot certify strictness there. Grid points are evaluated in
//! deterministic grid order.

mod continuous;
mod grids;
mod increasing;
mod intersection;
mod skewed;
mod steps;
mod table;

pub use continuous::{
    check_gamma_ordering, check_poisson_gamma_link, default_link_factors, default_shape_grid,
    default_t_grid, run_link_grid, LinkPoint, LinkReport, OrderingPoint, OrderingReport,
};
pub use grids::{
    check_chernoff, check_theorem_poisson, run_increasing_grid, run_intersection_grid,
    ChernoffReport, GridEntry, GridReport, GridSpec,
};
pub use increasing::{check_increasing, check_lemma_ratio, ratio_sequence_monotone, LemmaReport};
pub use intersection::check_intersection;
pub use skewed::{default_skew_grid, find_skewed_binomial_failure, SkewReport, SkewWitness};
pub use steps::{statistic_atoms, RefDist, StatAtom, StatKind};

use crate::distributions::{self, FamilySpec, Outcome};
use crate::error::{Error, Result};

/// Scan windows keep every outcome whose pmf is at least this value.
pub const DEFAULT_PMF_THRESHOLD: f64 = 1e-15;

/// Inequalities within this relative distance of equality are
/// indeterminate: double precision cannot certify strictness there.
pub const TIE_EPS: f64 = 1e-14;

/// Strictness margin for the ratio-monotonicity deltas.
pub const RATIO_MARGIN: f64 = 1e-12;

/// Gaussian cells below this are skipped in the ratio checks instead of
/// dividing by a denormal.
pub const CELL_FLOOR: f64 = 1e-300;

/// Contiguous outcome range with pmf ≥ threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWindow {
    pub lo: u64,
    pub hi: u64,
    pub threshold: f64,
}

impl ScanWindow {
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

pub(crate) fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0 && threshold < 1e-6) {
        return Err(Error::domain(
            "scan_window",
            format!("pmf threshold {threshold} not in (0, 1e-6)"),
        ));
    }
    Ok(())
}

/// The window of all outcomes with pmf ≥ threshold, found by walking
/// outward from the mean; all supported discrete families are unimodal so
/// the window is contiguous.
pub fn scan_window(spec: &FamilySpec<f64>, threshold: f64) -> Result<ScanWindow> {
    check_threshold(threshold)?;
    if !spec.is_discrete() {
        return Err(Error::domain(
            "scan_window",
            "windows are defined for discrete families",
        ));
    }
    let top = spec.support_max();
    let mut start = spec.mean().floor() as u64;
    if let Some(t) = top {
        start = start.min(t);
    }
    let pmf_at = |m: u64| -> Result<f64> { distributions::pmf(spec, &Outcome::Count(m)) };
    if pmf_at(start)? < threshold {
        return Err(Error::domain(
            "scan_window",
            format!("no outcome reaches pmf {threshold} near the mean"),
        ));
    }
    let mut lo = start;
    while lo > 0 && pmf_at(lo - 1)? >= threshold {
        lo -= 1;
    }
    let mut hi = start;
    loop {
        if let Some(t) = top {
            if hi == t {
                break;
            }
        }
        if pmf_at(hi + 1)? < threshold {
            break;
        }
        hi += 1;
    }
    Ok(ScanWindow { lo, hi, threshold })
}

/// Which inequality or ratio sequence a finding refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// P(M < m) < Φ(G(m))
    Lower,
    /// Φ(G(m)) < P(M ≤ m)
    Upper,
    /// pmf(m)/[Φ(G(m+1))−Φ(G(m))] must be nondecreasing
    RatioUp,
    /// pmf(m)/[Φ(G(m))−Φ(G(m−1))] must be nonincreasing
    RatioDown,
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inequality::Lower => write!(f, "lower"),
            Inequality::Upper => write!(f, "upper"),
            Inequality::RatioUp => write!(f, "ratio-up"),
            Inequality::RatioDown => write!(f, "ratio-down"),
        }
    }
}

/// Per-outcome classification of the strict inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossingFlag {
    Pass,
    Indeterminate(Inequality),
    Violation(Inequality),
}

/// A strict-inequality finding with its (signed) margin; negative margins
/// are genuine violations, magnitudes within the tie band are
/// indeterminate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub m: u64,
    pub side: Inequality,
    pub margin: f64,
}

/// One outcome of an intersection scan.
///
/// `lower`/`mid`/`upper` are P(M < m), Φ(G(m)), P(M ≤ m); the margins are
/// the same differences evaluated in small-tail space, and
/// r = margin_lower / (margin_lower + margin_upper) is the crossing
/// position, in (0, 1) exactly when the step is crossed strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingRecord {
    pub m: u64,
    pub lower: f64,
    pub mid: f64,
    pub upper: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    pub r: f64,
    pub flag: CrossingFlag,
}

/// Direction of a ratio-monotonicity delta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioDirection {
    Up,
    Down,
}

/// Successive-ratio difference between outcomes m and m+1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioDelta {
    pub m: u64,
    pub direction: RatioDirection,
    pub ratio_at: f64,
    pub ratio_next: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

/// Everything one scan of one family produced.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub spec: FamilySpec<f64>,
    pub window: ScanWindow,
    pub records: Vec<CrossingRecord>,
    pub ratio_deltas: Vec<RatioDelta>,
    pub violations: Vec<Violation>,
    /// Findings inside the tie band, listed separately from violations.
    pub indeterminate: Vec<Violation>,
    /// Outcomes skipped because a Gaussian cell underflowed.
    pub skipped: Vec<u64>,
}

impl ConjectureReport {
    pub fn status(&self) -> Status {
        if self.violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Tie band for comparing two probabilities a < b computed in the same
/// tail space.
pub(crate) fn tie_band(a: f64, b: f64) -> f64 {
    TIE_EPS * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
