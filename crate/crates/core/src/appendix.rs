//! Numeric checks of the inequalities relating `Re(z^{4t})` to `Re(z)^{4t}`,
//! and of the weighted ratio lemma used to prove them.
//!
//! Comparisons that can be tight carry an allowance for the rounding error of
//! `z^{4t}`, which is computed by repeated squaring: every product loses at
//! most a few ulps of `|z|^{4t}`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mc::run_batches;

pub const IDENTITY_REL_TOL: f64 = 1e-9;
pub const MIN_POWER_MODULUS: f64 = 1e-200;
pub const MAX_POWER_MODULUS: f64 = 1e200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerBoundCase {
    pub z: Complex64,
    pub t: u32,
    pub beta: f64,
    pub alpha: f64,
}

impl PowerBoundCase {
    pub fn new(z: Complex64, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadInput("t must be positive".into()));
        }
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::BadInput(format!("non-finite z = {z}")));
        }
        if z.re == 0.0 {
            return Err(Error::DegenerateCase("Re(z) = 0"));
        }
        let log_mod = 4.0 * f64::from(t) * z.norm().ln();
        if !(MIN_POWER_MODULUS.ln()..=MAX_POWER_MODULUS.ln()).contains(&log_mod) {
            return Err(Error::BadInput(format!(
                "|z|^(4t) = e^{log_mod:.1} is outside [1e-200, 1e200]"
            )));
        }
        let beta = z.im / z.re;
        let m = 4.0 * f64::from(t);
        Ok(Self {
            z,
            t,
            beta,
            alpha: 1.0 - m * (m - 1.0) / 2.0 * beta * beta,
        })
    }

    pub fn power(&self) -> Complex64 {
        self.z.powu(4 * self.t)
    }

    /// `Re(z)^{4t} (1 + beta^2)^{2t}`, which is `|z|^{4t}`.
    pub fn upper(&self) -> f64 {
        let m = 4 * self.t as i32;
        self.z.re.powi(m) * (1.0 + self.beta * self.beta).powi(2 * self.t as i32)
    }

    fn rounding(&self) -> f64 {
        8.0 * f64::from(4 * self.t) * f64::EPSILON * self.z.norm().powi(4 * self.t as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub identity_holds: bool,
    pub re_power: f64,
    pub upper: f64,
    pub upper_holds: bool,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.upper_holds
    }
}

/// Squared-modulus identity for `z^{4t}` and the upper bound on `Re(z^{4t})`.
pub fn check_identity_part1(case: &PowerBoundCase) -> Result<IdentityReport> {
    let w = case.power();
    if w.re == 0.0 {
        return Err(Error::DegenerateCase("Re(z^(4t)) = 0"));
    }
    let q = w.im / w.re;
    let lhs = (w.re * (1.0 + q * q).sqrt()).powi(2);
    let upper = case.upper();
    let rhs = upper * upper;
    let rel_err = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
    Ok(IdentityReport {
        lhs,
        rhs,
        rel_err,
        identity_holds: rel_err <= IDENTITY_REL_TOL,
        re_power: w.re,
        upper,
        upper_holds: w.re <= upper + case.rounding(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerReport {
    pub re_power: f64,
    pub positive: bool,
    pub ratio_sq: f64,
    pub ratio_bound: f64,
    pub ratio_holds: bool,
    pub lower: f64,
    pub lower_holds: bool,
}

impl LowerReport {
    pub fn holds(&self) -> bool {
        self.positive && self.ratio_holds && self.lower_holds
    }
}

/// Positivity of `Re(z^{4t})`, the bound on `Im/Re` of `z^{4t}`, and the
/// lower bound on `Re(z^{4t})`; all need `alpha > 0`.
pub fn check_lower_parts(case: &PowerBoundCase) -> Result<LowerReport> {
    if case.alpha <= 0.0 {
        return Err(Error::AlphaNotPositive(case.alpha));
    }
    let w = case.power();
    let m = f64::from(4 * case.t);
    let b2 = case.beta * case.beta;
    let ratio_bound = (m / case.alpha).powi(2) * b2;
    let upper = case.upper();
    let lower = upper / (1.0 + ratio_bound).sqrt();
    let err = case.rounding();
    let positive = w.re > 0.0;
    let (ratio_sq, ratio_holds) = if positive {
        let q = w.im / w.re;
        // error in q from absolute error `err` in both parts of w
        let dq = err * (1.0 + q.abs()) / (w.re - err).max(f64::MIN_POSITIVE);
        (q * q, q.abs() <= ratio_bound.sqrt() + dq)
    } else {
        (f64::NAN, false)
    };
    Ok(LowerReport {
        re_power: w.re,
        positive,
        ratio_sq,
        ratio_bound,
        ratio_holds,
        lower,
        lower_holds: w.re >= lower - err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioLemmaReport {
    pub min: f64,
    pub ratio: f64,
    pub max: f64,
    pub holds: bool,
}

/// `min B_s/A_s <= sum lambda_s B_s / sum lambda_s A_s <= max B_s/A_s`.
pub fn check_ratio_lemma(lambdas: &[f64], a: &[f64], b: &[f64]) -> Result<RatioLemmaReport> {
    if lambdas.is_empty() || lambdas.len() != a.len() || a.len() != b.len() {
        return Err(Error::BadInput(format!(
            "lengths {}, {}, {} must agree and be non-zero",
            lambdas.len(),
            a.len(),
            b.len()
        )));
    }
    if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::BadInput(format!("weight {l} is not positive")));
    }
    if let Some(x) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::BadInput(format!("A = {x} is not positive")));
    }
    if let Some(x) = b.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::BadInput(format!("B = {x} is negative")));
    }
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut num, mut den) = (0.0, 0.0);
    for ((&l, &x), &y) in lambdas.iter().zip(a).zip(b) {
        let r = y / x;
        min = min.min(r);
        max = max.max(r);
        num += l * y;
        den += l * x;
    }
    let ratio = num / den;
    let slack = 1e-12 * max.abs().max(1.0);
    Ok(RatioLemmaReport {
        min,
        ratio,
        max,
        holds: min - slack <= ratio && ratio <= max + slack,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepReport {
    pub cases: u64,
    pub seed: u64,
    pub identity_checked: u64,
    pub identity_violations: u64,
    pub upper_violations: u64,
    pub lower_applicable: u64,
    pub not_applicable: u64,
    pub positivity_violations: u64,
    pub ratio_bound_violations: u64,
    pub lower_violations: u64,
    pub rejected: u64,
    pub ratio_lemma_instances: u64,
    pub ratio_lemma_violations: u64,
    pub max_identity_rel_err: f64,
}

impl SweepReport {
    pub fn violations(&self) -> u64 {
        self.identity_violations
            + self.upper_violations
            + self.positivity_violations
            + self.ratio_bound_violations
            + self.lower_violations
            + self.ratio_lemma_violations
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0 && self.identity_checked > 0 && self.lower_applicable > 0
    }
}

impl std::ops::AddAssign for SweepReport {
    fn add_assign(&mut self, o: Self) {
        self.cases += o.cases;
        self.identity_checked += o.identity_checked;
        self.identity_violations += o.identity_violations;
        self.upper_violations += o.upper_violations;
        self.lower_applicable += o.lower_applicable;
        self.not_applicable += o.not_applicable;
        self.positivity_violations += o.positivity_violations;
        self.ratio_bound_violations += o.ratio_bound_violations;
        self.lower_violations += o.lower_violations;
        self.rejected += o.rejected;
        self.ratio_lemma_instances += o.ratio_lemma_instances;
        self.ratio_lemma_violations += o.ratio_lemma_violations;
        self.max_identity_rel_err = self.max_identity_rel_err.max(o.max_identity_rel_err);
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cases={} identity={}/{} lower={}/{} (not applicable {}) ratio_lemma={}/{} max_rel_err={:.2e}",
            self.cases,
            self.identity_checked - self.identity_violations - self.upper_violations,
            self.identity_checked,
            self.lower_applicable
                - self.positivity_violations
                - self.ratio_bound_violations
                - self.lower_violations,
            self.lower_applicable,
            self.not_applicable,
            self.ratio_lemma_instances - self.ratio_lemma_violations,
            self.ratio_lemma_instances,
            self.max_identity_rel_err,
        )
    }
}

fn sweep_case<R: Rng>(rng: &mut R, acc: &mut SweepReport) {
    acc.cases += 1;
    let t: u32 = rng.random_range(1..=5);
    let m = f64::from(4 * t);
    let radius = rng.random_range(-2.0f64..2.0).exp();
    // every other case stays inside the alpha > 0 cone
    let theta = if rng.random::<bool>() {
        let edge = (2.0 / (m * (m - 1.0))).sqrt().atan();
        rng.random_range(-edge..edge)
    } else {
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
    };
    let z = Complex64::from_polar(radius, theta);
    if z.re.abs() <= 1e-6 {
        acc.rejected += 1;
        return;
    }
    let Ok(case) = PowerBoundCase::new(z, t) else {
        acc.rejected += 1;
        return;
    };
    match check_identity_part1(&case) {
        Ok(r) => {
            acc.identity_checked += 1;
            acc.identity_violations += u64::from(!r.identity_holds);
            acc.upper_violations += u64::from(!r.upper_holds);
            acc.max_identity_rel_err = acc.max_identity_rel_err.max(r.rel_err);
        }
        Err(_) => acc.rejected += 1,
    }
    match check_lower_parts(&case) {
        Ok(r) => {
            acc.lower_applicable += 1;
            acc.positivity_violations += u64::from(!r.positive);
            acc.ratio_bound_violations += u64::from(!r.ratio_holds);
            acc.lower_violations += u64::from(!r.lower_holds);
        }
        Err(_) => acc.not_applicable += 1,
    }
}

fn sweep_ratio_lemma<R: Rng>(rng: &mut R, acc: &mut SweepReport) {
    let len = rng.random_range(1..=20);
    let lambdas: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..10.0)).collect();
    let a: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..10.0)).collect();
    let b: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..10.0)).collect();
    acc.ratio_lemma_instances += 1;
    match check_ratio_lemma(&lambdas, &a, &b) {
        Ok(r) if r.holds => {}
        _ => acc.ratio_lemma_violations += 1,
    }
}

/// Random sweep: `cases` proposition cases and one ratio-lemma instance per
/// ten cases.
pub fn appendix_sweep(cases: u64, seed: u64) -> SweepReport {
    let mut report = run_batches(cases, seed, |rng, len| {
        let mut acc = SweepReport::default();
        for i in 0..len {
            sweep_case(rng, &mut acc);
            if i % 10 == 0 {
                sweep_ratio_lemma(rng, &mut acc);
            }
        }
        acc
    });
    report.seed = seed;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn case(re: f64, im: f64, t: u32) -> PowerBoundCase {
        PowerBoundCase::new(Complex64::new(re, im), t).unwrap()
    }

    #[test]
    fn one_is_trivial() {
        let r = check_identity_part1(&case(1.0, 0.0, 1)).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.holds());
        let l = check_lower_parts(&case(1.0, 0.0, 3)).unwrap();
        assert!(l.holds());
        assert_eq!(l.ratio_bound, 0.0);
    }

    #[test]
    fn sixteenth_turn_identity() {
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 16.0);
        let c = PowerBoundCase::new(z, 1).unwrap();
        let r = check_identity_part1(&c).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);
        // z^4 = e^{i pi/4}
        assert!((r.re_power - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_example() {
        let c = case(2.0, 0.1, 2);
        let r = check_identity_part1(&c).unwrap();
        assert!(r.upper_holds);
        let direct = Complex64::new(2.0, 0.1).powu(8);
        assert!((r.re_power - direct.re).abs() < 1e-9);
        assert!((r.upper - 4.01f64.powi(4)).abs() < 1e-9);
    }

    #[test]
    fn small_angle_lower_parts() {
        let c = case(1.0, 0.05, 1);
        assert!((c.alpha - (1.0 - 6.0 * 0.0025)).abs() < 1e-15);
        let r = check_lower_parts(&c).unwrap();
        assert!(r.holds(), "{r:?}");
        // (1 + 0.05i)^4 by binomial expansion
        let re = 1.0 - 6.0 * 0.0025 + 0.05f64.powi(4);
        let im = 4.0 * 0.05 - 4.0 * 0.05f64.powi(3);
        assert!((r.re_power - re).abs() < 1e-15);
        assert!((r.ratio_sq - (im / re).powi(2)).abs() < 1e-15);
        assert!(r.lower <= re && re <= c.upper());
    }

    #[test]
    fn real_positive_z() {
        for t in 1..=5 {
            let r = check_lower_parts(&case(1.7, 0.0, t)).unwrap();
            assert!(r.holds());
            assert_eq!(r.ratio_sq, 0.0);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            PowerBoundCase::new(Complex64::new(0.0, 1.0), 1),
            Err(Error::DegenerateCase(_))
        ));
        // z^4 = -4, alpha = 1 - 6 < 0
        let c = case(1.0, 1.0, 1);
        assert!(matches!(check_lower_parts(&c), Err(Error::AlphaNotPositive(a)) if a == -5.0));
        // z = e^{i pi/8}: z^4 = i
        let c = PowerBoundCase::new(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_8), 1).unwrap();
        let w = c.power();
        assert!(w.re.abs() < 1e-15);
        assert!(PowerBoundCase::new(Complex64::new(1e-20, 0.0), 5).is_err());
        assert!(PowerBoundCase::new(Complex64::new(1e20, 0.0), 5).is_err());
    }

    #[test]
    fn ratio_lemma_examples() {
        let r = check_ratio_lemma(&[1.0, 1.0], &[1.0, 2.0], &[1.0, 4.0]).unwrap();
        assert!((r.ratio - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!((r.min, r.max), (1.0, 2.0));
        assert!(r.holds);
        let r = check_ratio_lemma(&[0.3, 2.0, 5.0], &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-15 && r.min == 1.0 && r.max == 1.0);
        assert!(check_ratio_lemma(&[1.0], &[0.0], &[1.0]).is_err());
        assert!(check_ratio_lemma(&[0.0], &[1.0], &[1.0]).is_err());
        assert!(check_ratio_lemma(&[1.0], &[1.0], &[-1.0]).is_err());
        assert!(check_ratio_lemma(&[1.0, 1.0], &[1.0], &[1.0]).is_err());
    }

    #[test]
    fn sweep_is_clean_and_reproducible() {
        let a = appendix_sweep(20_000, 3);
        assert!(a.passed(), "{a}");
        assert!(a.lower_applicable > 5_000 && a.not_applicable > 5_000);
        assert_eq!(a, appendix_sweep(20_000, 3));
    }

    proptest! {
        #[test]
        fn upper_dominates_exact_dominates_lower(
            log_r in -2.0f64..2.0, frac in -0.999f64..0.999, t in 1u32..=5
        ) {
            let m = f64::from(4 * t);
            let theta = frac * (2.0 / (m * (m - 1.0))).sqrt().atan();
            let c = PowerBoundCase::new(Complex64::from_polar(log_r.exp(), theta), t).unwrap();
            prop_assert!(c.alpha > 0.0);
            let id = check_identity_part1(&c).unwrap();
            let lo = check_lower_parts(&c).unwrap();
            prop_assert!(id.holds() && lo.holds());
            prop_assert!(lo.re_power > 0.0);
        }
    }
}
