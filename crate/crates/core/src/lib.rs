//! Signed likelihood-root transform of exponential families.
//!
//! For a random variable `X` with base distribution `P0` inside a
//! one-dimensional exponential family, the *G-transform* maps an outcome
//! `x` to the signed root of the information divergence from the tilted
//! family member with mean `x` back to the base:
//!
//! ```text
//! G(x) = ±(2 D(P^x ‖ P0))^(1/2)      (− below the base mean, + at or above)
//! ```
//!
//! `G(X)` is close to a standard Gaussian for the families handled here,
//! and the quantile step function of a discrete `G(M)` against the Gaussian
//! has remarkable crossing structure. This crate provides:
//!
//! - [`specfun`]: self-contained high-accuracy special functions
//!   (log-gamma, regularized incomplete gamma/beta, normal CDF/quantile),
//!   everything built from series and continued fractions so the accuracy
//!   is auditable;
//! - [`distributions`]: exact pmf/CDF/survival/mean for binomial, Poisson,
//!   unit-scale Gamma, geometric, and Poisson-binomial families;
//! - [`divergence`]: closed-form information divergences along each
//!   family's exponential-tilt curve plus the two-bin `χ²`/`G²` statistics
//!   and a generic f-divergence;
//! - [`gtransform`]: the signed-root transform itself, its Gamma inverse,
//!   Gaussian cell probabilities, and `exp(−D)` tail bounds;
//! - [`harness`]: grid-scanning verification of the intersection and
//!   increasing step properties, the Gamma stochastic ordering, the
//!   Poisson–Gamma waiting-time duality, and the skewed-binomial
//!   two-sided counterexample search.
//!
//! The numeric kernel is generic over the scalar type through the
//! [`Real`] trait (`f32` or `f64`); the harness and everything downstream
//! of it work in `f64`, re-exported through the concrete aliases below.

pub mod distributions;
pub mod divergence;
pub mod error;
pub mod gtransform;
pub mod harness;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

pub use distributions::{FamilySpec, Outcome};
pub use divergence::{DivergenceValue, TwoBinSample};
pub use gtransform::{CellPair, ChernoffPoint, GValue, TailSide};

/// Library version, surfaced by the CLI's `--version`.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Concrete `f64` instantiations; the harness and CLI work in these.
pub type Family = FamilySpec<f64>;
pub type Outcome64 = Outcome<f64>;
pub type GValue64 = GValue<f64>;
