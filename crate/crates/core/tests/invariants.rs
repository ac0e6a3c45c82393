//! Cross-module property tests for the kernel invariants.

use gtrans::distributions::{FamilySpec, Outcome};
use gtrans::divergence::{div_binomial, div_gamma_mean, div_poisson, div_poisson_binomial};
use gtrans::gtransform::g_transform;
use gtrans::harness::{check_chernoff, check_intersection, DEFAULT_PMF_THRESHOLD};
use gtrans::specfun::{
    log_gamma, reg_beta, reg_gamma_lower, reg_gamma_upper, std_normal_cdf, std_normal_quantile,
};
use proptest::prelude::*;

#[test]
fn incomplete_gamma_recurrence_grid() {
    // P(a+1, x) = P(a, x) − x^a e^(−x)/Γ(a+1) over the stated grid
    for a in 1..=50u32 {
        let a = f64::from(a);
        let mut x = 0.1f64;
        while x <= 100.0 {
            let lhs = reg_gamma_lower(a + 1.0, x).unwrap();
            let step = (a * x.ln() - x - log_gamma(a + 1.0).unwrap()).exp();
            let rhs = reg_gamma_lower(a, x).unwrap() - step;
            assert!(
                (lhs - rhs).abs() <= 1e-12,
                "a={a} x={x}: {lhs:.16} vs {rhs:.16}"
            );
            x += 1.7;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn incomplete_gamma_complementarity(a in 0.05f64..80.0, x in 0.0f64..160.0) {
        let p = reg_gamma_lower(a, x).unwrap();
        let q = reg_gamma_upper(a, x).unwrap();
        prop_assert!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0);
        prop_assert!((p + q - 1.0).abs() <= 1e-14, "P={p} Q={q}");
    }

    #[test]
    fn incomplete_gamma_monotone_in_x(a in 0.05f64..80.0, x in 0.0f64..150.0, dx in 0.0f64..8.0) {
        let p0 = reg_gamma_lower(a, x).unwrap();
        let p1 = reg_gamma_lower(a, x + dx).unwrap();
        prop_assert!(p1 >= p0 - 1e-15, "P({a},{x}) = {p0} > P({a},{}) = {p1}", x + dx);
    }

    #[test]
    fn beta_symmetry(x in 0.0f64..1.0, a in 0.1f64..50.0, b in 0.1f64..50.0) {
        let i = reg_beta(x, a, b).unwrap();
        let j = reg_beta(1.0 - x, b, a).unwrap();
        prop_assert!(i >= 0.0 && i <= 1.0);
        prop_assert!((i + j - 1.0).abs() <= 1e-14, "I={i} J={j}");
    }

    #[test]
    fn beta_monotone_in_x(a in 0.1f64..50.0, b in 0.1f64..50.0, x in 0.0f64..1.0, dx in 0.0f64..0.2) {
        let hi = (x + dx).min(1.0);
        let i0 = reg_beta(x, a, b).unwrap();
        let i1 = reg_beta(hi, a, b).unwrap();
        prop_assert!(i1 >= i0 - 1e-15);
    }

    #[test]
    fn normal_quantile_round_trip(z in -8.0f64..4.6) {
        // above z ≈ 4.7 the double 1 − Φ(z) representation drops below the
        // 1e-10 z-resolution, so no quantile can recover z from p there;
        // the symmetric information-preserving route covers that side below
        let p = std_normal_cdf(z);
        let back = std_normal_quantile(p).unwrap();
        prop_assert!((back - z).abs() <= 1e-10, "z={z} back={back}");
    }

    #[test]
    fn normal_quantile_round_trip_upper_via_small_side(z in 4.6f64..8.0) {
        // carry the upper tail as its (fully representable) complement
        let tail = std_normal_cdf(-z);
        let back = -std_normal_quantile(tail).unwrap();
        prop_assert!((back - z).abs() <= 1e-10, "z={z} back={back}");
    }

    #[test]
    fn divergences_nonnegative_and_zero_at_mean(
        n in 1u64..400,
        p in 0.01f64..0.99,
        lambda in 0.01f64..300.0,
        t in 0.01f64..300.0,
    ) {
        let m = ((n as f64 * p).round() as u64).min(n);
        prop_assert!(div_binomial(m, n, p).unwrap().nats() >= 0.0);
        prop_assert!(div_poisson(lambda.round() as u64, lambda).unwrap().nats() >= 0.0);
        // continuous family: exact zero at the mean outcome
        let at_mean = div_gamma_mean(t, t).unwrap().nats();
        prop_assert!(at_mean.abs() <= 1e-15, "D(t‖t) = {at_mean}");
    }

    #[test]
    fn poisson_gamma_divergence_identity(m in 1u64..100, t in 0.05f64..250.0) {
        let a = div_poisson(m, t).unwrap().nats();
        let b = div_gamma_mean(t, m as f64).unwrap().nats();
        prop_assert!((a - b).abs() <= 1e-13 * (1.0 + a), "m={m} t={t}: {a} vs {b}");
    }

    #[test]
    fn poisson_binomial_equal_probs_matches_binomial(n in 1usize..120, p in 0.02f64..0.98, frac in 0.0f64..1.0) {
        let x = (frac * n as f64).round() as u64;
        let probs = vec![p; n];
        let a = div_poisson_binomial(x, &probs).unwrap().nats();
        let b = div_binomial(x, n as u64, p).unwrap().nats();
        prop_assert!((a - b).abs() <= 1e-11 * (1.0 + b), "n={n} p={p} x={x}: {a} vs {b}");
    }

    #[test]
    fn transform_monotone_on_random_specs(n in 1u64..150, p in 0.02f64..0.98) {
        let spec = FamilySpec::binomial(n, p).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for m in 0..=n {
            let z = g_transform(&spec, Outcome::Count(m)).unwrap().z;
            prop_assert!(z > prev, "G not strictly increasing at m={m}");
            prev = z;
        }
    }
}

proptest! {
    // heavier scans get fewer cases
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Falsifiable conjecture scan: any counterexample here is a finding,
    /// and proptest prints the witness spec for one-command reproduction.
    #[test]
    fn intersection_holds_on_random_binomials(n in 1u64..300, p in 0.01f64..0.5) {
        let spec = FamilySpec::binomial(n, p).unwrap();
        let report = check_intersection(&spec, DEFAULT_PMF_THRESHOLD).unwrap();
        prop_assert!(
            report.violations.is_empty(),
            "binomial({n},{p}) violates at {:?}",
            report.violations.first()
        );
        for rec in &report.records {
            prop_assert!(rec.r > 0.0 && rec.r < 1.0, "m={}: r={}", rec.m, rec.r);
        }
    }

    #[test]
    fn chernoff_bound_dominates_tails(lambda in 0.02f64..400.0) {
        let spec = FamilySpec::poisson(lambda).unwrap();
        let report = check_chernoff(&spec, DEFAULT_PMF_THRESHOLD).unwrap();
        prop_assert!(report.max_excess <= 1e-13, "excess {}", report.max_excess);
    }
}
