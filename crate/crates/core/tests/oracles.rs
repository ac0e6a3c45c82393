//! Independent oracles for the special functions and exact CDFs: adaptive
//! quadrature, Maclaurin series, exact rational arithmetic, and plain
//! bisection. Each oracle is self-contained and shares no code with the
//! implementation path it checks.

use gtrans::distributions::{cdf, survival, FamilySpec, Outcome};
use gtrans::specfun::{reg_beta, reg_gamma_lower, reg_gamma_upper, std_normal_cdf, std_normal_quantile};

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse<F: Fn(f64) -> f64 + Copy>(
        f: F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = rule(&f, a, m);
        let right = rule(&f, m, b);
        let err = left + right - whole;
        if depth == 0 || err.abs() <= 15.0 * tol {
            return left + right + err / 15.0;
        }
        recurse(f, a, m, left, 0.5 * tol, depth - 1) + recurse(f, m, b, right, 0.5 * tol, depth - 1)
    }
    let whole = rule(&f, a, b);
    recurse(f, a, b, whole, tol, 60)
}

#[test]
fn reg_gamma_lower_matches_quadrature() {
    // P(3, 3) = ∫₀³ t² e^(−t) dt / Γ(3), Γ(3) = 2 exactly
    let oracle = simpson(|t| t * t * (-t).exp(), 0.0, 3.0, 1e-16) / 2.0;
    let ours = reg_gamma_lower(3.0f64, 3.0).unwrap();
    assert!(
        (ours - oracle).abs() < 4e-15,
        "P(3,3): {ours:.17} vs oracle {oracle:.17}"
    );
    // non-integer shape too: P(2.5, 1.7), Γ(2.5) = 1.5·0.5·√π
    let gamma_2_5 = 1.5 * 0.5 * std::f64::consts::PI.sqrt();
    let oracle = simpson(|t| t.powf(1.5) * (-t).exp(), 0.0, 1.7, 1e-16) / gamma_2_5;
    let ours = reg_gamma_lower(2.5f64, 1.7).unwrap();
    assert!(
        (ours - oracle).abs() < 4e-15,
        "P(2.5,1.7): {ours:.17} vs {oracle:.17}"
    );
}

#[test]
fn reg_gamma_upper_matches_quadrature() {
    // Q(2, 10) = ∫₁₀^∞ t e^(−t) dt / Γ(2); integrate to 60 (tail < 1e-22)
    let oracle = simpson(|t| t * (-t).exp(), 10.0, 60.0, 1e-19);
    let ours = reg_gamma_upper(2.0f64, 10.0).unwrap();
    assert!(
        ((ours - oracle) / oracle).abs() < 1e-13,
        "Q(2,10): {ours:.17e} vs {oracle:.17e}"
    );
}

#[test]
fn reg_beta_matches_quadrature() {
    // I_0.3(2, 5) = ∫₀^0.3 t(1−t)⁴ dt / B(2,5), B(2,5) = 1/30
    let oracle = 30.0 * simpson(|t| t * (1.0 - t).powi(4), 0.0, 0.3, 1e-17);
    let ours = reg_beta(0.3f64, 2.0, 5.0).unwrap();
    assert!(
        (ours - oracle).abs() < 4e-15,
        "I_0.3(2,5): {ours:.17} vs {oracle:.17}"
    );
    // awkward shapes: substitute t = u^(5/3) so the a = 0.6 edge
    // singularity disappears and the quadrature is smooth
    let g = |u: f64| (5.0 / 3.0) * (1.0 - u.powf(5.0 / 3.0)).powf(2.2);
    let b = simpson(g, 0.0, 1.0, 1e-17);
    let oracle = simpson(g, 0.0, 0.4f64.powf(0.6), 1e-17) / b;
    let ours = reg_beta(0.4f64, 0.6, 3.2).unwrap();
    assert!(
        (ours - oracle).abs() < 1e-13,
        "I_0.4(0.6,3.2): {ours:.15} vs {oracle:.15}"
    );
}

/// erf by its Maclaurin series: erf(x) = 2/√π Σ (−1)ⁿ x^(2n+1)/(n!(2n+1)).
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= -x * x / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.abs() < 1e-22 * sum.abs().max(1e-30) || n > 300 {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

fn phi_oracle(z: f64) -> f64 {
    0.5 + 0.5 * erf_series(z / std::f64::consts::SQRT_2)
}

#[test]
fn normal_cdf_matches_erf_series() {
    let z = -std::f64::consts::SQRT_2;
    let ours = std_normal_cdf(z);
    let oracle = phi_oracle(z);
    assert!((ours - oracle).abs() < 2e-16, "Φ(−√2): {ours:.17} vs {oracle:.17}");

    let ours = std_normal_cdf(1.96f64);
    let oracle = phi_oracle(1.96);
    assert!((ours - oracle).abs() < 4e-16, "Φ(1.96): {ours:.17} vs {oracle:.17}");

    // sweep where the alternating series keeps full relative accuracy
    let mut z = -1.5;
    while z <= 1.5 {
        let ours = std_normal_cdf(z);
        let oracle = phi_oracle(z);
        let small = oracle.min(1.0 - oracle);
        assert!(
            (ours - oracle).abs() <= 1e-14 * small.max(1e-300),
            "Φ({z}): {ours:.17e} vs {oracle:.17e}"
        );
        z += 0.125;
    }
    // further out the series oracle is only absolutely accurate
    let mut z = -3.0;
    while z <= 3.0 {
        let ours = std_normal_cdf(z);
        let oracle = phi_oracle(z);
        assert!((ours - oracle).abs() <= 5e-15, "Φ({z}): {ours:.17e} vs {oracle:.17e}");
        z += 0.25;
    }
}

#[test]
fn normal_cdf_deep_tail_matches_quadrature() {
    // tail mass by quadrature of the density, relative accuracy from the
    // adaptive tolerance scaling with the value
    for &z in &[-4.0f64, -6.0, -10.0] {
        // factor out φ(z): Φ(z) = φ(z)·∫₀^∞ exp(−u|z| − u²/2) du, an O(1)
        // integrand the adaptive rule handles at full precision
        let a = -z;
        let g = |u: f64| (-u * a - 0.5 * u * u).exp();
        let u_max = 60.0 / a + 6.0;
        let phi = (-0.5 * z * z).exp() / std::f64::consts::TAU.sqrt();
        let oracle = phi * simpson(g, 0.0, u_max, 1e-17);
        let ours = std_normal_cdf(z);
        assert!(
            ((ours - oracle) / oracle).abs() <= 1e-12,
            "Φ({z}): {ours:.17e} vs quadrature {oracle:.17e}"
        );
        // reflection ties the upper tail to the same oracle (one rounding
        // of the 1 − · complement)
        assert!((1.0 - std_normal_cdf(-z) - ours).abs() <= 1e-16);
    }
}

#[test]
fn normal_quantile_matches_bisection() {
    // bisection against std_normal_cdf is independent of the rational
    // guess + Newton path; always bisect on the small tail, where Φ keeps
    // full relative resolution (near p = 1 a p-space ulp is worth ~1e-5
    // in z, so bisecting there certifies nothing)
    let bisect_lower = |q: f64| {
        let (mut lo, mut hi) = (-40.0f64, 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if std_normal_cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    for &p in &[0.975f64, 0.5001, 0.12, 0.0004, 1e-10, 1.0 - 1e-12] {
        let ours = std_normal_quantile(p).unwrap();
        let oracle = if p <= 0.5 {
            bisect_lower(p)
        } else {
            -bisect_lower(1.0 - p) // 1 − p is exact for p ≥ ½
        };
        assert!(
            (ours - oracle).abs() <= 1e-12 * (1.0 + oracle.abs()),
            "q({p}): {ours:.15} vs {oracle:.15}"
        );
    }
    let z975 = std_normal_quantile(0.975f64).unwrap();
    assert!((z975 - 1.959_963_984_540_054_2).abs() < 1e-13);
}

#[test]
fn binomial_cdf_matches_exact_rational() {
    // P(Bin(10, 1/2) ≤ 7) = 968/1024 by integer arithmetic
    let mut acc: u128 = 0;
    let choose = |n: u128, k: u128| -> u128 {
        let mut r: u128 = 1;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    };
    for k in 0..=7u128 {
        acc += choose(10, k);
    }
    assert_eq!(acc, 968);
    let spec = FamilySpec::binomial(10, 0.5f64).unwrap();
    let ours = cdf(&spec, &Outcome::Count(7)).unwrap();
    assert!((ours - acc as f64 / 1024.0).abs() < 1e-15);
}

#[test]
fn binomial_cdf_matches_brute_force_summation() {
    // pmf by the stable multiplicative recurrence, summed ascending
    for n in (1..=60u64).step_by(3) {
        for &p in &[0.01f64, 0.17, 0.5, 0.83, 0.99] {
            let spec = FamilySpec::binomial(n, p).unwrap();
            let odds = p / (1.0 - p);
            let mut mass = (1.0 - p).powi(n as i32);
            let mut acc = 0.0;
            for m in 0..=n {
                if m > 0 {
                    mass *= (n - m + 1) as f64 / m as f64 * odds;
                }
                acc += mass;
                let ours = cdf(&spec, &Outcome::Count(m)).unwrap();
                assert!(
                    (ours - acc).abs() <= 1e-13,
                    "n={n} p={p} m={m}: {ours} vs {acc}"
                );
            }
        }
    }
}

#[test]
fn poisson_cdf_matches_brute_force_summation() {
    for &lambda in &[0.05f64, 0.7, 3.0, 17.0, 90.0, 200.0] {
        let spec = FamilySpec::poisson(lambda).unwrap();
        // term-by-term in extended precision via compensated summation
        let mut term = (-lambda).exp();
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        let mut m = 0u64;
        loop {
            let t = acc + term;
            comp += if acc.abs() >= term.abs() {
                (acc - t) + term
            } else {
                (term - t) + acc
            };
            acc = t;
            let ours = cdf(&spec, &Outcome::Count(m)).unwrap();
            assert!(
                (ours - (acc + comp)).abs() <= 1e-13,
                "λ={lambda} m={m}: {ours} vs {}",
                acc + comp
            );
            if term / (acc + comp) < 1e-18 && m as f64 > lambda {
                break;
            }
            m += 1;
            term *= lambda / m as f64;
        }
    }
}

#[test]
fn poisson_survival_example() {
    let spec = FamilySpec::poisson(1.0f64).unwrap();
    let s = survival(&spec, &Outcome::Count(1)).unwrap();
    assert!((s - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
}
