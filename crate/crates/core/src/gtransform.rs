//! The signed square-root transform and its companions.
//!
//! For an outcome x of a family member with base mean μ0, the transform is
//! G(x) = −√(2D) for x < μ0 and +√(2D) for x ≥ μ0, where D is the
//! divergence of the tilted member with mean x from the base. A tie at the
//! mean takes the + branch; D = 0 makes the sign unobservable there, so
//! the convention only matters for downstream sign tests.

use crate::distributions::{FamilySpec, Outcome};
use crate::divergence;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun;

/// Which tail a bound or sign refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Lower,
    Upper,
}

impl std::fmt::Display for TailSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailSide::Lower => write!(f, "lower"),
            TailSide::Upper => write!(f, "upper"),
        }
    }
}

/// A transformed outcome: the signed root `z`, the divergence it came
/// from, and the inputs that produced it.
///
/// Invariants: z² = 2·div_nats up to rounding, and sign(z) matches
/// sign(outcome − mean) with z = +0 at the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct GValue<T: Real> {
    pub z: T,
    pub div_nats: T,
    pub outcome: Outcome<T>,
    pub spec: FamilySpec<T>,
}

/// Divergence of the tilted member with mean at `m` from `spec`.
fn divergence_at<T: Real>(spec: &FamilySpec<T>, m: &Outcome<T>) -> Result<T> {
    match (spec, m) {
        (FamilySpec::Binomial { n, p }, Outcome::Count(k)) => {
            Ok(divergence::div_binomial(*k, *n, *p)?.nats())
        }
        (FamilySpec::Poisson { lambda }, Outcome::Count(k)) => {
            Ok(divergence::div_poisson(*k, *lambda)?.nats())
        }
        (FamilySpec::Geometric { mu }, Outcome::Count(k)) => {
            Ok(divergence::div_geometric(*k, *mu)?.nats())
        }
        (FamilySpec::PoissonBinomial { probs }, Outcome::Count(k)) => {
            Ok(divergence::div_poisson_binomial(*k, probs)?.nats())
        }
        (FamilySpec::GammaShape { shape }, m) => {
            let t = match m {
                Outcome::Time(t) => *t,
                Outcome::Count(k) => T::of_u64(*k),
            };
            if t < T::zero() || !t.is_finite() {
                return Err(Error::domain("g_transform", format!("time {t} must be ≥ 0")));
            }
            if t == T::zero() {
                // left edge of the support: the divergence diverges
                return Ok(T::infinity());
            }
            Ok(divergence::div_gamma_mean(t, *shape)?.nats())
        }
        (_, Outcome::Time(t)) => Err(Error::domain(
            "g_transform",
            format!("discrete family needs an integer outcome, got time {t}"),
        )),
    }
}

/// The signed-root transform of an outcome.
pub fn g_transform<T: Real>(spec: &FamilySpec<T>, m: Outcome<T>) -> Result<GValue<T>> {
    if let (Some(top), Outcome::Count(k)) = (spec.support_max(), &m) {
        if *k > top {
            return Err(Error::domain(
                "g_transform",
                format!("outcome {k} above support top {top}"),
            ));
        }
    }
    let d = divergence_at(spec, &m)?;
    let value = match &m {
        Outcome::Count(k) => T::of_u64(*k),
        Outcome::Time(t) => *t,
    };
    let root = (d + d).sqrt();
    let z = if value >= spec.mean() { root } else { -root };
    Ok(GValue {
        z,
        div_nats: d,
        outcome: m,
        spec: spec.clone(),
    })
}

/// G over the extended integer line for discrete families: G(−1) = −∞ and,
/// for bounded supports, G(n+1) = +∞, so that Φ of a boundary cell edge is
/// an exact 0 or 1.
pub fn g_step<T: Real>(spec: &FamilySpec<T>, i: i64) -> Result<T> {
    if !spec.is_discrete() {
        return Err(Error::domain("g_step", "extended steps need a discrete family"));
    }
    if i < -1 {
        return Err(Error::domain("g_step", format!("extended outcome {i} below −1")));
    }
    if i == -1 {
        return Ok(T::neg_infinity());
    }
    let k = i as u64;
    if let Some(top) = spec.support_max() {
        if k == top + 1 {
            return Ok(T::infinity());
        }
        if k > top + 1 {
            return Err(Error::domain(
                "g_step",
                format!("extended outcome {k} above top sentinel {}", top + 1),
            ));
        }
    }
    Ok(g_transform(spec, Outcome::Count(k))?.z)
}

/// Φ(z_hi) − Φ(z_lo) evaluated on whichever tail keeps the difference a
/// subtraction of directly computed small numbers.
pub(crate) fn gaussian_interval<T: Real>(z_lo: T, z_hi: T) -> T {
    debug_assert!(z_lo <= z_hi);
    if z_lo >= T::zero() {
        specfun::std_normal_cdf(-z_lo) - specfun::std_normal_cdf(-z_hi)
    } else {
        specfun::std_normal_cdf(z_hi) - specfun::std_normal_cdf(z_lo)
    }
}

/// The Gaussian cell probabilities below and above a discrete outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPair<T> {
    /// Φ(G(m)) − Φ(G(m−1))
    pub below: T,
    /// Φ(G(m+1)) − Φ(G(m))
    pub above: T,
}

/// Point probabilities Φ(G(m)) − Φ(G(m−1)) and Φ(G(m+1)) − Φ(G(m)) of the
/// Gaussian pushed through the inverse step function, using the extended
/// ±∞ endpoints at the support boundary.
pub fn gaussian_cell<T: Real>(spec: &FamilySpec<T>, m: u64) -> Result<CellPair<T>> {
    let i = m as i64;
    let g_prev = g_step(spec, i - 1)?;
    let g_here = g_step(spec, i)?;
    let g_next = g_step(spec, i + 1)?;
    Ok(CellPair {
        below: gaussian_interval(g_prev, g_here),
        above: gaussian_interval(g_here, g_next),
    })
}

/// One point of an exp(−D) tail-bound curve.
///
/// The bound reads P(X ≤ x) ≤ exp(−D) on the lower side and
/// P(X ≥ x) ≤ exp(−D) on the upper side; at the mean both hold with
/// bound 1 and the upper side is reported, matching the sign convention.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffPoint<T: Real> {
    pub outcome: Outcome<T>,
    pub side: TailSide,
    pub bound: T,
}

pub fn chernoff_bound<T: Real>(spec: &FamilySpec<T>, m: Outcome<T>) -> Result<ChernoffPoint<T>> {
    let g = g_transform(spec, m)?;
    Ok(ChernoffPoint {
        outcome: g.outcome,
        side: if g.z < T::zero() {
            TailSide::Lower
        } else {
            TailSide::Upper
        },
        bound: (-g.div_nats).exp(),
    })
}

/// Inverse of the Gamma-family transform: the unique t with
/// G_Γ(t) = z for the given shape.
///
/// Root-finding on the strictly monotone branch (t < shape for z < 0,
/// t > shape for z > 0) with a bisection-safeguarded Newton iteration on
/// h(t) = D(t) − z²/2, stopping at 1e-12 in z-space.
pub fn g_inverse_gamma<T: Real>(shape: T, z: T) -> Result<T> {
    if !shape.is_finite() || shape <= T::zero() {
        return Err(Error::domain(
            "g_inverse_gamma",
            format!("shape {shape} must be positive"),
        ));
    }
    if !z.is_finite() {
        return Err(Error::domain("g_inverse_gamma", format!("z {z} must be finite")));
    }
    if z == T::zero() {
        return Ok(shape);
    }
    let target = z * z * T::of(0.5);
    let d = |t: T| t - shape - shape * (t / shape).ln();
    // bracket the branch: d is decreasing on (0, shape), increasing after
    let (mut a, mut b) = if z < T::zero() {
        let lo = shape * (-(target / shape) - T::one()).exp();
        (lo, shape)
    } else {
        let mut hi = shape * T::of(2.0);
        while d(hi) < target {
            hi = hi * T::of(2.0);
        }
        (shape, hi)
    };
    let z_tol = T::of(1e-12);
    let mut t = (a + b) * T::of(0.5);
    for _ in 0..200 {
        let dv = d(t).max(T::zero());
        let g = if t < shape {
            -(dv + dv).sqrt()
        } else {
            (dv + dv).sqrt()
        };
        if (g - z).abs() <= z_tol {
            return Ok(t);
        }
        if g < z {
            a = t;
        } else {
            b = t;
        }
        // Newton step on h(t) = d(t) − target, safeguarded by the bracket
        let slope = T::one() - shape / t;
        let mut next = if slope != T::zero() {
            t - (d(t) - target) / slope
        } else {
            (a + b) * T::of(0.5)
        };
        if !(next > a && next < b) || !next.is_finite() {
            next = (a + b) * T::of(0.5);
        }
        if (next - t).abs() <= T::epsilon() * t.abs() {
            return Ok(t);
        }
        t = next;
    }
    Err(Error::convergence(
        "g_inverse_gamma",
        200,
        t.to_f64().unwrap_or(f64::NAN),
    ))
}

/// ℓ(u) = u − 2·ln u − 1/u, the derivative witness showing t·G′(t) is
/// monotone for the Gamma transform: ℓ ≤ 0 on (0, 1] and ℓ ≥ 0 on [1, ∞).
pub fn tg_prime_monotonicity_witness<T: Real>(u: T) -> Result<T> {
    if !u.is_finite() || u <= T::zero() {
        return Err(Error::domain(
            "tg_prime_monotonicity_witness",
            format!("u {u} must be positive"),
        ));
    }
    Ok(u - (u.ln() + u.ln()) - u.recip())
}
