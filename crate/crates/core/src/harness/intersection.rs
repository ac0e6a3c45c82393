//! The intersection check: P(M < m) < Φ(G(m)) < P(M ≤ m) for every
//! outcome in the scan window.

use super::table::WindowTable;
use super::{
    scan_window, tie_band, ConjectureReport, CrossingFlag, CrossingRecord, Inequality, Violation,
};
use crate::distributions::{FamilySpec, Outcome};
use crate::error::Result;
use crate::gtransform::g_transform;
use crate::specfun::std_normal_cdf;

/// Evaluate both strict inequalities at one outcome, on the small-tail
/// side of the distribution.
pub(crate) fn crossing_record(
    spec: &FamilySpec<f64>,
    table: &WindowTable,
    m: u64,
) -> Result<CrossingRecord> {
    let z = g_transform(spec, Outcome::Count(m))?.z;
    let mean = spec.mean();

    let (lower, mid, upper, margin_lower, margin_upper, cmp_scale_lower, cmp_scale_upper);
    if (m as f64) <= mean {
        // lower tail: work directly in CDF space
        let lo = table.cdf_before(m);
        let up = table.cdf(m);
        let phi = std_normal_cdf(z);
        lower = lo;
        mid = phi;
        upper = up;
        margin_lower = phi - lo;
        margin_upper = up - phi;
        cmp_scale_lower = tie_band(phi, lo);
        cmp_scale_upper = tie_band(up, phi);
    } else {
        // upper tail: compare survivals so both sides stay small
        let s_here = table.survival(m);
        let s_next = table.survival_after(m);
        let phi_tail = std_normal_cdf(-z);
        lower = 1.0 - s_here;
        mid = 1.0 - phi_tail;
        upper = 1.0 - s_next;
        margin_lower = s_here - phi_tail;
        margin_upper = phi_tail - s_next;
        cmp_scale_lower = tie_band(s_here, phi_tail);
        cmp_scale_upper = tie_band(phi_tail, s_next);
    }

    let width = margin_lower + margin_upper;
    let r = if width > 0.0 {
        margin_lower / width
    } else {
        f64::NAN
    };

    let flag = if margin_lower < -cmp_scale_lower {
        CrossingFlag::Violation(Inequality::Lower)
    } else if margin_upper < -cmp_scale_upper {
        CrossingFlag::Violation(Inequality::Upper)
    } else if margin_lower <= cmp_scale_lower {
        CrossingFlag::Indeterminate(Inequality::Lower)
    } else if margin_upper <= cmp_scale_upper {
        CrossingFlag::Indeterminate(Inequality::Upper)
    } else {
        CrossingFlag::Pass
    };

    Ok(CrossingRecord {
        m,
        lower,
        mid,
        upper,
        margin_lower,
        margin_upper,
        r,
        flag,
    })
}

/// Scan a discrete family for strict step crossings.
///
/// Violations are recorded with their exact inputs and margins; expected
/// failures (geometric and other non-conforming families) are reported,
/// never erased.
pub fn check_intersection(spec: &FamilySpec<f64>, threshold: f64) -> Result<ConjectureReport> {
    let window = scan_window(spec, threshold)?;
    let table = WindowTable::build(spec, window)?;
    let mut records = Vec::with_capacity(window.len());
    let mut violations = Vec::new();
    let mut indeterminate = Vec::new();
    for m in window.iter() {
        let rec = crossing_record(spec, &table, m)?;
        match rec.flag {
            CrossingFlag::Violation(side) => violations.push(Violation {
                m,
                side,
                margin: match side {
                    Inequality::Lower => rec.margin_lower,
                    _ => rec.margin_upper,
                },
            }),
            CrossingFlag::Indeterminate(side) => indeterminate.push(Violation {
                m,
                side,
                margin: match side {
                    Inequality::Lower => rec.margin_lower,
                    _ => rec.margin_upper,
                },
            }),
            CrossingFlag::Pass => {}
        }
        records.push(rec);
    }
    Ok(ConjectureReport {
        spec: spec.clone(),
        window,
        records,
        ratio_deltas: Vec::new(),
        violations,
        indeterminate,
        skipped: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Status, DEFAULT_PMF_THRESHOLD};

    fn record_at(spec: &FamilySpec<f64>, m: u64) -> CrossingRecord {
        let window = scan_window(spec, crate::harness::DEFAULT_PMF_THRESHOLD).unwrap();
        let table = WindowTable::build(spec, window).unwrap();
        crossing_record(spec, &table, m).unwrap()
    }

    #[test]
    fn poisson_one_at_zero() {
        let spec = FamilySpec::poisson(1.0f64).unwrap();
        let rec = record_at(&spec, 0);
        assert_eq!(rec.lower, 0.0);
        assert!((rec.mid - 0.078_649_603_525_142_565f64).abs() < 1e-15);
        assert!((rec.upper - 0.367_879_441_171_442_32f64).abs() < 1e-15);
        assert!((rec.r - 0.213_791_788_077_9f64).abs() < 1e-12, "r = {}", rec.r);
        assert_eq!(rec.flag, CrossingFlag::Pass);
    }

    #[test]
    fn binomial_ten_half_at_seven() {
        let spec = FamilySpec::binomial(10, 0.5f64).unwrap();
        let rec = record_at(&spec, 7);
        assert!((rec.lower - 0.828_125).abs() < 1e-15);
        assert!((rec.upper - 0.945_312_5).abs() < 1e-15);
        assert!((rec.mid - 0.900_224_504_503_169_8f64).abs() < 1e-13, "mid = {}", rec.mid);
        assert_eq!(rec.flag, CrossingFlag::Pass);
    }

    #[test]
    fn binomial_grid_sample_passes() {
        for &(n, p) in &[(10u64, 0.5f64), (25, 0.3), (40, 0.1), (100, 0.01), (500, 0.02)] {
            let spec = FamilySpec::binomial(n, p).unwrap();
            let report = check_intersection(&spec, DEFAULT_PMF_THRESHOLD).unwrap();
            assert_eq!(
                report.status(),
                Status::Pass,
                "binomial({n},{p}): {:?}",
                report.violations.first()
            );
            assert!(report.indeterminate.is_empty());
            for rec in &report.records {
                assert!(rec.r > 0.0 && rec.r < 1.0, "n={n} p={p} m={}: r={}", rec.m, rec.r);
            }
        }
    }

    #[test]
    fn geometric_violates_somewhere() {
        // integral mean: P(M < μ) = 1 − (μ/(1+μ))^μ exceeds Φ(0) = ½ at μ ≥ 2
        let spec = FamilySpec::geometric(2.0f64).unwrap();
        let report = check_intersection(&spec, DEFAULT_PMF_THRESHOLD).unwrap();
        assert_eq!(report.status(), Status::Fail);
        assert!(
            report
                .violations
                .iter()
                .any(|v| v.side == Inequality::Lower && v.margin < -1e-3),
            "{:?}",
            report.violations
        );
    }

    #[test]
    fn geometric_unit_mean_has_exact_tie() {
        // μ = 1, m = 1: P(M < 1) = ½ = Φ(G(1)) exactly
        let spec = FamilySpec::geometric(1.0f64).unwrap();
        let report = check_intersection(&spec, DEFAULT_PMF_THRESHOLD).unwrap();
        assert!(report
            .indeterminate
            .iter()
            .any(|v| v.m == 1 && v.side == Inequality::Lower));
        // ... and genuine violations further out
        assert_eq!(report.status(), Status::Fail);
    }

    #[test]
    fn records_are_pmf_consistent() {
        let spec = FamilySpec::binomial(2000, 0.5f64).unwrap();
        let report = check_intersection(&spec, DEFAULT_PMF_THRESHOLD).unwrap();
        let mut total_gap = 0.0;
        for rec in &report.records {
            let pmf = crate::distributions::pmf(&spec, &Outcome::Count(rec.m)).unwrap();
            total_gap += ((rec.margin_lower + rec.margin_upper) - pmf).abs();
        }
        assert!(total_gap <= 1e-13, "Σ|width − pmf| = {total_gap:e}");
        // the same consistency holds for a mid-size Poisson window
        let spec = FamilySpec::poisson(500.0f64).unwrap();
        let report = check_intersection(&spec, DEFAULT_PMF_THRESHOLD).unwrap();
        let mut total_gap = 0.0;
        for rec in &report.records {
            let pmf = crate::distributions::pmf(&spec, &Outcome::Count(rec.m)).unwrap();
            total_gap += ((rec.margin_lower + rec.margin_upper) - pmf).abs();
        }
        assert!(total_gap <= 1e-13, "poisson Σ gap = {total_gap:e}");
    }
}
