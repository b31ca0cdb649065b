//! Exact counts `N_{n,t}` of `n x t` partial Hadamard matrices and the walk
//! return probabilities `P_n^t(0,0) = N_{n,t} / 2^{nt}`.
//!
//! Three independent routes: a sparse path-count convolution of the walk, the
//! closed forms for two and three rows, and a direct matrix scan.

mod brute;
mod closed;
mod dp;

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub use brute::{brute_force_count, BRUTE_FULL_CELLS, BRUTE_ROW_N, BRUTE_ROW_T};
pub use closed::{count_closed_form, count_closed_form_with, N2Reading};

use crate::error::{Error, Result};
use crate::lattice::{IncrementTable, LatticePoint, Parameters};
use dp::{origin_paths, propagate, KeyCodec};

pub const DEFAULT_STATE_BUDGET: usize = 1 << 26;
pub const DEFAULT_STEP_CAP: usize = 32;
pub const DEFAULT_MAX_N: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CountMethod {
    Dp,
    ClosedFormN2,
    ClosedFormN3,
    BruteForce,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Dp => "DP",
            CountMethod::ClosedFormN2 => "CLOSED_FORM_N2",
            CountMethod::ClosedFormN3 => "CLOSED_FORM_N3",
            CountMethod::BruteForce => "BRUTE_FORCE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub params: Parameters,
    pub matrix_count: BigUint,
    pub return_prob: BigRational,
    pub method: CountMethod,
}

impl CountResult {
    pub(crate) fn from_matrix_count(params: Parameters, count: BigUint, method: CountMethod) -> Self {
        let den = BigUint::one() << (params.n * params.t);
        let return_prob = BigRational::new(count.clone().into(), den.into());
        Self {
            params,
            matrix_count: count,
            return_prob,
            method,
        }
    }

    /// Each canonical path is one column-negation class of `2^t` matrices.
    pub(crate) fn from_origin_paths(params: Parameters, paths: BigUint, method: CountMethod) -> Self {
        Self::from_matrix_count(params, paths << params.t, method)
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn t(&self) -> usize {
        self.params.t
    }

    pub fn prob_f64(&self) -> f64 {
        ratio_f64(&self.return_prob)
    }

    pub fn to_record(&self) -> CountRecord {
        CountRecord {
            n: self.n(),
            t: self.t(),
            count: self.matrix_count.to_string(),
            prob_num: self.return_prob.numer().to_string(),
            prob_den: self.return_prob.denom().to_string(),
            method: self.method.to_string(),
            wall_time_ms: None,
        }
    }
}

/// Flat serializable form of a [`CountResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRecord {
    pub n: usize,
    pub t: usize,
    pub count: String,
    pub prob_num: String,
    pub prob_den: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

pub const COUNT_CSV_HEADER: &str = "n,t,count,prob_num,prob_den,method";

pub fn count_csv(records: &[CountRecord]) -> String {
    let mut out = String::from(COUNT_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.n, r.t, r.count, r.prob_num, r.prob_den, r.method);
    }
    out
}

/// Nearest double to a nonnegative rational, robust to huge numerators and
/// denominators.
pub fn ratio_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    let shift = num.bits() as i64 - den.bits() as i64;
    let (num, den) = if shift > 60 {
        (num.clone(), den << (shift - 60) as usize)
    } else {
        (num << (60 - shift) as usize, den.clone())
    };
    let quotient = (num / den).to_f64().unwrap_or(f64::NAN);
    let sign = if q.numer().sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
    sign * quotient * 2f64.powi((shift - 60) as i32)
}

/// `log2` of a big integer (`-inf` for zero).
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.log2() + shift as f64
}

/// Resource limits for the convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpConfig {
    pub state_budget: usize,
    pub step_cap: usize,
    pub max_n: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        Self {
            state_budget: DEFAULT_STATE_BUDGET,
            step_cap: DEFAULT_STEP_CAP,
            max_n: DEFAULT_MAX_N,
        }
    }
}

impl DpConfig {
    fn check(&self, params: &Parameters) -> Result<()> {
        if params.n > self.max_n {
            return Err(Error::CapExceeded {
                what: "n",
                limit: self.max_n as u64,
                got: params.n as u64,
            });
        }
        if params.t > self.step_cap {
            return Err(Error::CapExceeded {
                what: "t",
                limit: self.step_cap as u64,
                got: params.t as u64,
            });
        }
        Ok(())
    }
}

/// `N_{n,t}` from the walk: origin path count over canonical increments, times `2^t`.
pub fn count_exact_dp(params: &Parameters) -> Result<CountResult> {
    count_exact_dp_with(params, &DpConfig::default())
}

pub fn count_exact_dp_with(params: &Parameters, cfg: &DpConfig) -> Result<CountResult> {
    cfg.check(params)?;
    let table = IncrementTable::new(params.n)?;
    let paths = if (params.n - 1) * params.t <= 127 {
        origin_paths::<u128>(&table, params.t, cfg.state_budget)?
    } else {
        origin_paths::<BigUint>(&table, params.t, cfg.state_budget)?
    };
    Ok(CountResult::from_origin_paths(*params, paths, CountMethod::Dp))
}

/// Path counts of the walk after `step` steps over the canonical increments.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    pub n: usize,
    pub step: usize,
    pub mass: BTreeMap<LatticePoint, BigUint>,
}

impl WalkDistribution {
    pub fn total_mass(&self) -> BigUint {
        self.mass.values().sum()
    }

    pub fn origin_mass(&self) -> BigUint {
        let d = crate::lattice::pair_count(self.n);
        self.mass
            .get(&LatticePoint::origin(d))
            .cloned()
            .unwrap_or_default()
    }

    /// `P_n^step(0, 0)`.
    pub fn return_prob(&self) -> BigRational {
        let den = BigUint::one() << ((self.n - 1) * self.step);
        BigRational::new(self.origin_mass().into(), den.into())
    }
}

pub fn walk_distribution(params: &Parameters, t: usize) -> Result<WalkDistribution> {
    walk_distribution_with(params, t, &DpConfig::default())
}

pub fn walk_distribution_with(params: &Parameters, t: usize, cfg: &DpConfig) -> Result<WalkDistribution> {
    cfg.check(&params.with_t(t))?;
    let table = IncrementTable::new(params.n)?;
    let codec = KeyCodec::new(&table, t)?;
    let mass = if (params.n - 1) * t <= 127 {
        propagate::<u128>(&codec, t, cfg.state_budget)?
            .into_iter()
            .map(|(k, m)| (codec.decode(k), BigUint::from(m)))
            .collect()
    } else {
        propagate::<BigUint>(&codec, t, cfg.state_budget)?
            .into_iter()
            .map(|(k, m)| (codec.decode(k), m))
            .collect()
    };
    Ok(WalkDistribution {
        n: params.n,
        step: t,
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, t: usize) -> Parameters {
        Parameters::new(n, t).unwrap()
    }

    fn dp(n: usize, t: usize) -> BigUint {
        count_exact_dp(&p(n, t)).unwrap().matrix_count
    }

    #[test]
    fn dp_small_values() {
        assert_eq!(dp(2, 4), BigUint::from(96u32));
        assert_eq!(dp(3, 4), BigUint::from(384u32));
        assert_eq!(dp(4, 4), BigUint::from(768u32));
        assert_eq!(dp(3, 8), BigUint::from(645120u32));
        assert_eq!(dp(2, 2), BigUint::from(8u32));
        assert_eq!(dp(5, 0), BigUint::one());
    }

    #[test]
    fn count_invariants() {
        let r = count_exact_dp(&p(3, 8)).unwrap();
        let back = &r.return_prob * BigRational::from_integer((BigUint::one() << 24usize).into());
        assert_eq!(back, BigRational::from_integer(r.matrix_count.clone().into()));
        assert!((&r.matrix_count % (BigUint::one() << 8usize)).is_zero());
        assert!((r.prob_f64() - 2520.0 / 65536.0).abs() < 1e-15);
    }

    #[test]
    fn zero_structure() {
        for n in 3..=4 {
            for t in 1..=16 {
                if t % 4 != 0 || t < n {
                    assert!(dp(n, t).is_zero(), "n = {n}, t = {t}");
                }
            }
        }
        assert!(dp(2, 3).is_zero());
        assert!(!dp(2, 6).is_zero());
    }

    #[test]
    fn dp_agrees_with_brute_force() {
        for n in 2..=6 {
            for t in 0..=BRUTE_FULL_CELLS / n {
                let a = count_exact_dp(&p(n, t)).unwrap().matrix_count;
                let b = brute_force_count(&p(n, t)).unwrap().matrix_count;
                assert_eq!(a, b, "n = {n}, t = {t}");
            }
        }
    }

    #[test]
    fn dp_agrees_with_closed_forms() {
        for n in 2..=3 {
            for t in [4, 8, 12, 16] {
                assert_eq!(dp(n, t), count_closed_form(&p(n, t)).unwrap().matrix_count);
            }
        }
    }

    #[test]
    fn big_integer_path_matches_u128_path() {
        let table = IncrementTable::new(3).unwrap();
        for t in [4, 8, 12] {
            let a = origin_paths::<u128>(&table, t, DEFAULT_STATE_BUDGET).unwrap();
            let b = origin_paths::<BigUint>(&table, t, DEFAULT_STATE_BUDGET).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn distribution_examples() {
        let w = walk_distribution(&p(3, 0), 0).unwrap();
        assert_eq!(w.mass.len(), 1);
        assert!(w.origin_mass().is_one());
        let w = walk_distribution(&p(3, 0), 1).unwrap();
        assert_eq!(w.mass.len(), 4);
        assert!(w.mass.values().all(|m| m.is_one()));
        // oracle: ordered pairs (m, m') of increments with m + m' = 0
        let inc = crate::lattice::enumerate_increments(3).unwrap();
        let pairs = inc
            .iter()
            .flat_map(|a| inc.iter().map(move |b| (a, b)))
            .filter(|(a, b)| a.coords.iter().zip(&b.coords).all(|(x, y)| x + y == 0))
            .count();
        let w = walk_distribution(&p(3, 0), 2).unwrap();
        assert_eq!(w.origin_mass(), BigUint::from(pairs));
    }

    #[test]
    fn distribution_origin_matches_count() {
        let w = walk_distribution(&p(4, 0), 8).unwrap();
        assert_eq!(w.return_prob(), count_exact_dp(&p(4, 8)).unwrap().return_prob);
        assert_eq!(w.total_mass(), BigUint::one() << 24usize);
        assert!(w.mass.keys().all(|x| x.reachable_after(8)));
    }

    #[test]
    fn caps_are_enforced() {
        let e = count_exact_dp(&p(7, 4)).unwrap_err();
        assert!(e.is_resource_cap());
        let e = count_exact_dp(&p(6, 64)).unwrap_err();
        assert!(e.is_resource_cap());
        let tiny = DpConfig {
            state_budget: 10,
            ..DpConfig::default()
        };
        let e = count_exact_dp_with(&p(4, 8), &tiny).unwrap_err();
        assert!(matches!(e, Error::MemoryBudgetExceeded { .. }));
    }

    #[test]
    fn csv_and_record() {
        let r = count_exact_dp(&p(3, 4)).unwrap().to_record();
        assert_eq!(r.count, "384");
        assert_eq!((r.prob_num.as_str(), r.prob_den.as_str()), ("3", "32"));
        let csv = count_csv(&[r]);
        assert_eq!(csv, "n,t,count,prob_num,prob_den,method\n3,4,384,3,32,DP\n");
    }

    #[test]
    fn big_log2() {
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
        assert!((log2_big(&(BigUint::one() << 5000usize)) - 5000.0).abs() < 1e-9);
        assert_eq!(log2_big(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn ratio_to_float() {
        let q = BigRational::new(1.into(), (BigUint::one() << 2000usize).into());
        assert_eq!(ratio_f64(&q), 0.0);
        let q = BigRational::new(3.into(), 32.into());
        assert_eq!(ratio_f64(&q), 0.09375);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn counts_are_divisible_by_column_classes(n in 2usize..=4, t in 0usize..=12) {
            let c = dp(n, t);
            prop_assert!((&c % (BigUint::one() << t)).is_zero());
        }
    }
}
