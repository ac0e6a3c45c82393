//! Windowed tail table: exact CDF/survival evaluation for every outcome
//! of a scan window.
//!
//! The special-function CDF routes are relative-accurate but evaluate
//! each point independently, so differences of adjacent mid-scale values
//! carry ~1e-14 of uncorrelated noise. The scans instead anchor the two
//! window-edge tails with the special functions (deep in the tails, where
//! those are at their best) and accumulate the in-window pmf — itself
//! accurate to a few ulp — with compensated summation from both ends.
//! Every cdf/survival pair this produces is consistent with the pmf to
//! machine precision while staying relative-accurate in both tails.

use super::ScanWindow;
use crate::distributions::{cdf, log_pmf, survival, FamilySpec, Outcome};
use crate::error::Result;

#[derive(Debug, Clone)]
pub(crate) struct WindowTable {
    window: ScanWindow,
    pmf: Vec<f64>,
    /// P(M ≤ m) for each window outcome.
    cdf_incl: Vec<f64>,
    /// P(M ≥ m) for each window outcome.
    surv_incl: Vec<f64>,
    /// P(M < lo)
    left_tail: f64,
    /// P(M > hi)
    right_tail: f64,
}

impl WindowTable {
    pub fn build(spec: &FamilySpec<f64>, window: ScanWindow) -> Result<Self> {
        let len = window.len();
        let mut pmf = Vec::with_capacity(len);
        for m in window.iter() {
            pmf.push(log_pmf(spec, &Outcome::Count(m))?.exp());
        }
        let left_tail = if window.lo == 0 {
            0.0
        } else {
            cdf(spec, &Outcome::Count(window.lo - 1))?
        };
        let right_tail = match spec.support_max() {
            Some(top) if window.hi >= top => 0.0,
            _ => survival(spec, &Outcome::Count(window.hi + 1))?,
        };

        let mut cdf_incl = Vec::with_capacity(len);
        let mut acc = left_tail;
        let mut comp = 0.0;
        for &p in &pmf {
            let t = acc + p;
            comp += if acc.abs() >= p.abs() {
                (acc - t) + p
            } else {
                (p - t) + acc
            };
            acc = t;
            cdf_incl.push(acc + comp);
        }
        let mut surv_incl = vec![0.0; len];
        let mut acc = right_tail;
        let mut comp = 0.0;
        for (i, &p) in pmf.iter().enumerate().rev() {
            let t = acc + p;
            comp += if acc.abs() >= p.abs() {
                (acc - t) + p
            } else {
                (p - t) + acc
            };
            acc = t;
            surv_incl[i] = acc + comp;
        }
        Ok(WindowTable {
            window,
            pmf,
            cdf_incl,
            surv_incl,
            left_tail,
            right_tail,
        })
    }

    pub fn window(&self) -> ScanWindow {
        self.window
    }

    fn index(&self, m: u64) -> usize {
        debug_assert!(m >= self.window.lo && m <= self.window.hi);
        (m - self.window.lo) as usize
    }

    pub fn pmf(&self, m: u64) -> f64 {
        self.pmf[self.index(m)]
    }

    /// P(M ≤ m); m may be window.lo − 1 (the left tail edge).
    pub fn cdf(&self, m: u64) -> f64 {
        if m + 1 == self.window.lo {
            return self.left_tail;
        }
        self.cdf_incl[self.index(m)]
    }

    /// P(M < m).
    pub fn cdf_before(&self, m: u64) -> f64 {
        if m == 0 {
            0.0
        } else {
            self.cdf(m - 1)
        }
    }

    /// P(M ≥ m); m may be window.hi + 1 (the right tail edge).
    pub fn survival(&self, m: u64) -> f64 {
        if m == self.window.hi + 1 {
            return self.right_tail;
        }
        self.surv_incl[self.index(m)]
    }

    /// P(M > m).
    pub fn survival_after(&self, m: u64) -> f64 {
        self.survival(m + 1)
    }
}
