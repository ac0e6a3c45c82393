//! Search for skewed binomials whose folded G²-versus-χ²₁ steps miss the
//! identity crossing even though the signed G-versus-Gaussian steps do
//! not.

use super::intersection::check_intersection;
use super::steps::{statistic_atoms, RefDist, StatKind};
use crate::distributions::FamilySpec;
use crate::error::Result;

/// A located (n, p) whose folded steps miss the identity line.
#[derive(Debug, Clone)]
pub struct SkewWitness {
    pub n: u64,
    pub p: f64,
    /// Outcomes sharing the violating step.
    pub outcomes: Vec<u64>,
    pub stat: f64,
    pub lower: f64,
    pub ref_cdf: f64,
    pub upper: f64,
    /// The violated margin (negative).
    pub margin: f64,
    /// The same (n, p) still satisfies the signed intersection.
    pub signed_intersection_pass: bool,
}

/// Search result; `witness` is `None` when the grid was exhausted without
/// a find, which is reported as inconclusive rather than as a failure.
#[derive(Debug, Clone)]
pub struct SkewReport {
    pub searched: usize,
    pub witness: Option<SkewWitness>,
}

impl SkewReport {
    pub fn conclusive(&self) -> bool {
        self.witness.is_some()
    }
}

/// Default (n, p) search grid: moderate n against small p, the skewed
/// regime where step-size interference between the two tails is
/// strongest.
pub fn default_skew_grid() -> Vec<(u64, f64)> {
    let ns = [5u64, 10, 15, 20, 30, 40, 50, 75, 100, 150, 200, 300, 400, 500];
    let ps = [0.001f64, 0.002, 0.005, 0.01, 0.02, 0.03, 0.05];
    let mut grid = Vec::with_capacity(ns.len() * ps.len());
    for &n in &ns {
        for &p in &ps {
            grid.push((n, p));
        }
    }
    grid
}

/// First strict folded-step violation for one (n, p), if any.
fn folded_violation(
    spec: &FamilySpec<f64>,
    kind: StatKind,
    threshold: f64,
) -> Result<Option<(Vec<u64>, f64, f64, f64, f64, f64)>> {
    let (atoms, _) = statistic_atoms(spec, kind, RefDist::ChiSq1, threshold)?;
    for a in &atoms {
        let (margin_lower, margin_upper) = a.crossing_margins();
        let (band_lower, band_upper) = a.crossing_bands();
        if margin_lower < -band_lower {
            return Ok(Some((
                a.outcomes.clone(),
                a.stat,
                a.lower,
                a.ref_cdf,
                a.upper,
                margin_lower,
            )));
        }
        if margin_upper < -band_upper {
            return Ok(Some((
                a.outcomes.clone(),
                a.stat,
                a.lower,
                a.ref_cdf,
                a.upper,
                margin_upper,
            )));
        }
    }
    Ok(None)
}

/// Scan (n, p) for a point where the two-sided (folded) comparison misses
/// the identity while the signed comparison still crosses every step.
///
/// With `two_sided` false the same grid is scanned in signed form, which
/// is expected to come back inconclusive (no violations exist there).
pub fn find_skewed_binomial_failure(
    two_sided: bool,
    grid: &[(u64, f64)],
    threshold: f64,
) -> Result<SkewReport> {
    let mut searched = 0;
    for &(n, p) in grid {
        let spec = FamilySpec::binomial(n, p)?;
        searched += 1;
        if !two_sided {
            let report = check_intersection(&spec, threshold)?;
            if let Some(v) = report.violations.first() {
                let rec = report.records.iter().find(|r| r.m == v.m).unwrap();
                return Ok(SkewReport {
                    searched,
                    witness: Some(SkewWitness {
                        n,
                        p,
                        outcomes: vec![v.m],
                        stat: 0.0,
                        lower: rec.lower,
                        ref_cdf: rec.mid,
                        upper: rec.upper,
                        margin: v.margin,
                        signed_intersection_pass: false,
                    }),
                });
            }
            continue;
        }
        if let Some((outcomes, stat, lower, ref_cdf, upper, margin)) =
            folded_violation(&spec, StatKind::G2, threshold)?
        {
            // consistency requirement: the signed form must still pass
            let signed = check_intersection(&spec, threshold)?;
            return Ok(SkewReport {
                searched,
                witness: Some(SkewWitness {
                    n,
                    p,
                    outcomes,
                    stat,
                    lower,
                    ref_cdf,
                    upper,
                    margin,
                    signed_intersection_pass: signed.violations.is_empty(),
                }),
            });
        }
    }
    Ok(SkewReport {
        searched,
        witness: None,
    })
}
