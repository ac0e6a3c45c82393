//! Continuous-side checks: the Gamma stochastic ordering and the
//! Poisson–Gamma waiting-time duality.

use crate::distributions::{cdf, survival, FamilySpec, Outcome};
use crate::error::{Error, Result};
use crate::gtransform::g_transform;
use crate::specfun::std_normal_cdf;

/// Default absolute tolerance for the ordering margin.
pub const ORDERING_TOL: f64 = 1e-12;

/// Default absolute tolerance for the duality gaps.
pub const LINK_TOL: f64 = 1e-13;

/// One grid point of the ordering check. `margin` is
/// P(T ≤ t) − Φ(G(t)), evaluated on the small-tail side; the ordering
/// statement requires it to be ≥ −tolerance everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingPoint {
    pub t: f64,
    pub phi_g: f64,
    pub cdf: f64,
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct OrderingReport {
    pub shape: f64,
    pub tolerance: f64,
    pub points: Vec<OrderingPoint>,
    pub violations: Vec<OrderingPoint>,
}

impl OrderingReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn min_margin(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Pointwise stochastic ordering of the Gamma transform below the
/// Gaussian: Φ(G_Γ(t)) ≤ P(T ≤ t) + tol for every t in the grid.
pub fn check_gamma_ordering(shape: f64, t_grid: &[f64]) -> Result<OrderingReport> {
    if t_grid.is_empty() {
        return Err(Error::domain("check_gamma_ordering", "empty t grid"));
    }
    let spec = FamilySpec::gamma_shape(shape)?;
    let mut points = Vec::with_capacity(t_grid.len());
    let mut violations = Vec::new();
    for &t in t_grid {
        let z = g_transform(&spec, Outcome::Time(t))?.z;
        let phi_g = std_normal_cdf(z);
        let lower = cdf(&spec, &Outcome::Time(t))?;
        let margin = if t <= shape {
            // both quantities are small lower tails
            lower - phi_g
        } else {
            // compare upper tails: Φ(−z) − Q(shape, t)
            std_normal_cdf(-z) - survival(&spec, &Outcome::Time(t))?
        };
        let point = OrderingPoint {
            t,
            phi_g,
            cdf: lower,
            margin,
        };
        if margin < -ORDERING_TOL {
            violations.push(point);
        }
        points.push(point);
    }
    Ok(OrderingReport {
        shape,
        tolerance: ORDERING_TOL,
        points,
        violations,
    })
}

/// Default t grid for an ordering scan: `points` values spanning
/// mean ± 6√m, clipped to stay positive.
pub fn default_t_grid(shape: f64, points: usize) -> Vec<f64> {
    let sigma = shape.sqrt();
    let lo = (shape - 6.0 * sigma).max(1e-4 * shape);
    let hi = shape + 6.0 * sigma;
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Shapes exercised by the default ordering scan.
pub fn default_shape_grid() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0]
}

/// One evaluation of the waiting-time duality at (m, t):
/// `tail_gap` = |P(M ≥ m) − P(T ≤ t)| for M ~ Poisson(t), T ~ Γ(m, 1),
/// and `negation_gap` = |G_P(m) + G_Γ(t)|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPoint {
    pub m: u64,
    pub t: f64,
    pub tail_gap: f64,
    pub negation_gap: f64,
}

pub fn check_poisson_gamma_link(m: u64, t: f64) -> Result<LinkPoint> {
    if m < 1 {
        return Err(Error::domain("check_poisson_gamma_link", "m must be ≥ 1"));
    }
    let poisson = FamilySpec::poisson(t)?;
    let gamma = FamilySpec::gamma_shape(m as f64)?;
    let surv_p = survival(&poisson, &Outcome::Count(m))?;
    let cdf_g = cdf(&gamma, &Outcome::Time(t))?;
    let g_p = g_transform(&poisson, Outcome::Count(m))?.z;
    let g_g = g_transform(&gamma, Outcome::Time(t))?.z;
    Ok(LinkPoint {
        m,
        t,
        tail_gap: (surv_p - cdf_g).abs(),
        negation_gap: (g_p + g_g).abs(),
    })
}

#[derive(Debug, Clone)]
pub struct LinkReport {
    pub tolerance: f64,
    pub points: Vec<LinkPoint>,
    pub max_tail_gap: f64,
    pub max_negation_gap: f64,
}

impl LinkReport {
    pub fn pass(&self) -> bool {
        self.max_tail_gap <= self.tolerance && self.max_negation_gap <= self.tolerance
    }
}

/// Multiplicative t factors for the default duality grid; t = factor·m
/// spans both tails of each waiting-time distribution.
pub fn default_link_factors(count: usize) -> Vec<f64> {
    let (lo, hi) = (0.2f64, 5.0f64);
    let step = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (step * i as f64).exp()).collect()
}

/// Run the duality check over m × (factor·m) and collect the worst gaps.
pub fn run_link_grid(ms: &[u64], factors: &[f64]) -> Result<LinkReport> {
    if ms.is_empty() || factors.is_empty() {
        return Err(Error::domain("run_link_grid", "empty grid"));
    }
    let mut points = Vec::with_capacity(ms.len() * factors.len());
    let (mut max_tail, mut max_neg) = (0.0f64, 0.0f64);
    for &m in ms {
        for &f in factors {
            let p = check_poisson_gamma_link(m, f * m as f64)?;
            max_tail = max_tail.max(p.tail_gap);
            max_neg = max_neg.max(p.negation_gap);
            points.push(p);
        }
    }
    Ok(LinkReport {
        tolerance: LINK_TOL,
        points,
        max_tail_gap: max_tail,
        max_negation_gap: max_neg,
    })
}
