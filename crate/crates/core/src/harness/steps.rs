//! Statistic step construction for Q-Q tables and folded comparisons.
//!
//! A discrete statistic S(M) induces a step function against a reference
//! distribution. For the signed transform the steps are ordered by
//! outcome; for the folded statistics (G², standardized square) outcomes
//! from both tails interleave, and because every folded statistic here is
//! U-shaped in m, the set {S ≤ s} is always a contiguous outcome interval
//! around the mean. Cumulative probabilities are therefore computed from
//! the two exact distribution tails, never from running float sums.

use super::table::WindowTable;
use super::{scan_window, tie_band, ScanWindow};
use crate::distributions::{FamilySpec, Outcome};
use crate::error::{Error, Result};
use crate::gtransform::g_transform;
use crate::specfun::std_normal_cdf;

/// Which statistic drives the step function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    /// The signed root G(m) itself.
    SignedG,
    /// The likelihood-ratio statistic 2·D(m) = G(m)².
    G2,
    /// The standardized square (m − mean)²/variance (the Pearson statistic
    /// of the two-bin sample for a binomial family).
    Chi2,
}

impl StatKind {
    pub fn is_folded(self) -> bool {
        !matches!(self, StatKind::SignedG)
    }
}

/// Reference distribution for the comparison axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefDist {
    Gaussian,
    /// The square of a standard Gaussian (chi-squared, one degree of
    /// freedom).
    ChiSq1,
}

impl RefDist {
    /// CDF at a statistic value.
    pub fn cdf(self, s: f64) -> f64 {
        match self {
            RefDist::Gaussian => std_normal_cdf(s),
            RefDist::ChiSq1 => 1.0 - self.sf(s),
        }
    }

    /// Survival at a statistic value, computed on the tail directly.
    pub fn sf(self, s: f64) -> f64 {
        match self {
            RefDist::Gaussian => std_normal_cdf(-s),
            RefDist::ChiSq1 => {
                if s <= 0.0 {
                    1.0
                } else {
                    2.0 * std_normal_cdf(-s.sqrt())
                }
            }
        }
    }
}

/// One step of the statistic's quantile function.
///
/// `lower`/`upper` are P(S < s)/P(S ≤ s); the `*_tail` fields hold the
/// same information as upper-tail probabilities with full relative
/// accuracy (`lower_tail` = P(S ≥ s) = 1 − lower, `upper_tail` = P(S > s)
/// = 1 − upper). `ref_cdf`/`ref_sf` evaluate the reference at s.
#[derive(Debug, Clone, PartialEq)]
pub struct StatAtom {
    pub outcomes: Vec<u64>,
    pub stat: f64,
    pub pmf: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_tail: f64,
    pub upper_tail: f64,
    pub ref_cdf: f64,
    pub ref_sf: f64,
}

impl StatAtom {
    /// Crossing margins of the identity line through this step, evaluated
    /// in whichever tail is small: (ref − lower, upper − ref).
    pub fn crossing_margins(&self) -> (f64, f64) {
        if self.ref_cdf <= 0.5 {
            (self.ref_cdf - self.lower, self.upper - self.ref_cdf)
        } else {
            (self.lower_tail - self.ref_sf, self.ref_sf - self.upper_tail)
        }
    }

    /// Tie bands matching [`Self::crossing_margins`]: magnitudes inside
    /// them cannot be certified strict in doubles.
    pub fn crossing_bands(&self) -> (f64, f64) {
        if self.ref_cdf <= 0.5 {
            (
                tie_band(self.ref_cdf, self.lower),
                tie_band(self.upper, self.ref_cdf),
            )
        } else {
            (
                tie_band(self.lower_tail, self.ref_sf),
                tie_band(self.ref_sf, self.upper_tail),
            )
        }
    }
}

fn stat_value(spec: &FamilySpec<f64>, kind: StatKind, m: u64) -> Result<f64> {
    let g = g_transform(spec, Outcome::Count(m))?;
    Ok(match kind {
        StatKind::SignedG => g.z,
        StatKind::G2 => 2.0 * g.div_nats,
        StatKind::Chi2 => {
            let d = m as f64 - spec.mean();
            d * d / spec.variance()
        }
    })
}

/// P(M < a) + P(M > b): the mass outside the outcome interval [a, b],
/// as a sum of two directly computed tails.
fn outside_interval(table: &WindowTable, a: u64, b: u64) -> f64 {
    table.cdf_before(a) + table.survival_after(b)
}

/// Build the ordered steps of a statistic over the scan window.
///
/// Exactly equal folded statistic values (the symmetric p = ½ case) merge
/// into a single step.
pub fn statistic_atoms(
    spec: &FamilySpec<f64>,
    kind: StatKind,
    reference: RefDist,
    threshold: f64,
) -> Result<(Vec<StatAtom>, ScanWindow)> {
    if !spec.is_discrete() {
        return Err(Error::domain(
            "statistic_atoms",
            "steps are defined for discrete families",
        ));
    }
    if matches!(reference, RefDist::ChiSq1) != kind.is_folded() {
        return Err(Error::domain(
            "statistic_atoms",
            "signed statistic pairs with the Gaussian reference, folded statistics with chi-squared(1)",
        ));
    }
    let window = scan_window(spec, threshold)?;
    let table = WindowTable::build(spec, window)?;
    let atoms = if kind.is_folded() {
        folded_atoms(spec, kind, reference, &table)?
    } else {
        signed_atoms(spec, reference, &table)?
    };
    Ok((atoms, window))
}

fn signed_atoms(
    spec: &FamilySpec<f64>,
    reference: RefDist,
    table: &WindowTable,
) -> Result<Vec<StatAtom>> {
    let window = table.window();
    let mut atoms = Vec::with_capacity(window.len());
    for m in window.iter() {
        let s = stat_value(spec, StatKind::SignedG, m)?;
        atoms.push(StatAtom {
            outcomes: vec![m],
            stat: s,
            pmf: table.pmf(m),
            lower: table.cdf_before(m),
            upper: table.cdf(m),
            lower_tail: table.survival(m),
            upper_tail: table.survival_after(m),
            ref_cdf: reference.cdf(s),
            ref_sf: reference.sf(s),
        });
    }
    Ok(atoms)
}

fn folded_atoms(
    spec: &FamilySpec<f64>,
    kind: StatKind,
    reference: RefDist,
    table: &WindowTable,
) -> Result<Vec<StatAtom>> {
    let window = table.window();
    let mean = spec.mean();
    // split the window at the mean; the statistic increases away from it
    // on both sides, so a two-pointer merge yields ascending steps and
    // grows the covered outcome interval one edge at a time
    let mut split = window.lo;
    for m in window.iter() {
        if (m as f64) <= mean {
            split = m;
        } else {
            break;
        }
    }
    let mut left: Vec<(u64, f64)> = Vec::new(); // split, split−1, …, lo
    for m in (window.lo..=split).rev() {
        left.push((m, stat_value(spec, kind, m)?));
    }
    let mut right: Vec<(u64, f64)> = Vec::new(); // split+1, …, hi
    for m in (split + 1)..=window.hi {
        right.push((m, stat_value(spec, kind, m)?));
    }

    let mut merged: Vec<(Vec<u64>, f64)> = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < left.len() || j < right.len() {
        let take_left = match (left.get(i), right.get(j)) {
            (Some(&(_, a)), Some(&(_, b))) => {
                if a == b {
                    // exact tie across the fold: one step for both outcomes
                    merged.push((vec![left[i].0, right[j].0], a));
                    i += 1;
                    j += 1;
                    continue;
                }
                a < b
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!(),
        };
        if take_left {
            merged.push((vec![left[i].0], left[i].1));
            i += 1;
        } else {
            merged.push((vec![right[j].0], right[j].1));
            j += 1;
        }
    }

    // walk the growing interval [a, b] of outcomes with S ≤ current step
    let mut atoms = Vec::with_capacity(merged.len());
    let mut bounds: Option<(u64, u64)> = None;
    for (outcomes, s) in merged {
        let before = match bounds {
            None => 1.0,
            Some((a, b)) => outside_interval(table, a, b),
        };
        let (mut a, mut b) = bounds.unwrap_or((outcomes[0], outcomes[0]));
        for &m in &outcomes {
            a = a.min(m);
            b = b.max(m);
        }
        bounds = Some((a, b));
        let after = outside_interval(table, a, b);
        let mut mass = 0.0;
        for &m in &outcomes {
            mass += table.pmf(m);
        }
        atoms.push(StatAtom {
            outcomes,
            stat: s,
            pmf: mass,
            lower: 1.0 - before,
            upper: 1.0 - after,
            lower_tail: before,
            upper_tail: after,
            ref_cdf: reference.cdf(s),
            ref_sf: reference.sf(s),
        });
    }
    Ok(atoms)
}
