//! The characteristic function of one walk step,
//! `psi(lambda) = 2^{-(n-1)} sum_{m in M} exp(i lambda . m)`,
//! and the local estimates of its magnitude, real part and imaginary part.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{pair_flat, IncrementTable, Parameters, TorusPoint};

/// Absolute slack used when comparing floating-point values against the
/// closed-form envelopes.
pub const BOUND_SLACK: f64 = 1e-9;

pub type ComplexValue = Complex64;

/// Reusable evaluator of `psi` for a fixed row count.
#[derive(Debug, Clone)]
pub struct CharFn {
    table: IncrementTable,
}

impl CharFn {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            table: IncrementTable::new(n)?,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.table.n()
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.table.d()
    }

    pub fn increments(&self) -> &IncrementTable {
        &self.table
    }

    /// Direct sum over the canonical increments. `lambda` may be any real
    /// vector of length `d`; `psi` is `2 pi` periodic in every coordinate.
    pub fn eval(&self, lambda: &[f64]) -> Complex64 {
        debug_assert_eq!(lambda.len(), self.d());
        let mut re = 0.0;
        let mut im = 0.0;
        for row in self.table.rows() {
            let phase: f64 = row
                .iter()
                .zip(lambda)
                .map(|(&m, &l)| if m > 0 { l } else { -l })
                .sum();
            let (s, c) = phase.sin_cos();
            re += c;
            im += s;
        }
        let scale = 1.0 / self.table.len() as f64;
        Complex64::new(re * scale, im * scale)
    }

    /// Same value, computed by splitting off row `k` (1-based):
    /// `psi = 2^{-(n-1)} sum_z cos(p_k . z) exp(i P_k . Q_k(z))`.
    pub fn eval_factorized(&self, lambda: &[f64], k: usize) -> Complex64 {
        let n = self.n();
        let others: Vec<usize> = (1..=n).filter(|&i| i != k).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut y = vec![1.0f64; n + 1];
        for mask in 0u64..(1u64 << (n - 1)) {
            for (bit, &row) in others.iter().enumerate() {
                y[row] = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
            }
            let mut linear = 0.0;
            for &i in &others {
                let (a, b) = if i < k { (i, k) } else { (k, i) };
                linear += lambda[pair_flat(n, a, b)] * y[i];
            }
            let mut quad = 0.0;
            for (a_idx, &a) in others.iter().enumerate() {
                for &b in &others[a_idx + 1..] {
                    quad += lambda[pair_flat(n, a, b)] * y[a] * y[b];
                }
            }
            acc += Complex64::from_polar(linear.cos(), quad);
        }
        acc / (1u64 << (n - 1)) as f64
    }

    fn check_dim(&self, lambda: &TorusPoint) -> Result<()> {
        if lambda.dim() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: lambda.dim(),
            });
        }
        Ok(())
    }
}

/// `psi(lambda)` by the direct sum over the increment set.
pub fn psi(params: &Parameters, lambda: &TorusPoint) -> Result<ComplexValue> {
    let cf = CharFn::new(params.n)?;
    cf.check_dim(lambda)?;
    Ok(cf.eval(lambda.as_slice()))
}

/// `psi(lambda)` through the row-`k` factorization.
pub fn psi_factorized(params: &Parameters, lambda: &TorusPoint, k: usize) -> Result<ComplexValue> {
    if !(1..=params.n).contains(&k) {
        return Err(Error::BadRowIndex { k, n: params.n });
    }
    let cf = CharFn::new(params.n)?;
    cf.check_dim(lambda)?;
    Ok(cf.eval_factorized(lambda.as_slice(), k))
}

/// `sum_{i<j<k} lambda_ij lambda_jk lambda_ik`.
pub fn triangle_sum(n: usize, lambda: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..=n {
        for j in i + 1..=n {
            let lij = lambda[pair_flat(n, i, j)];
            if lij == 0.0 {
                continue;
            }
            for k in j + 1..=n {
                s += lij * lambda[pair_flat(n, j, k)] * lambda[pair_flat(n, i, k)];
            }
        }
    }
    s
}

/// Second-order picture of `psi` on a small box `B_delta`.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub lambda: TorusPoint,
    pub delta: f64,
    pub psi: ComplexValue,
    /// `exp(-|lambda|^2 / 2)`.
    pub re_gauss: f64,
    /// `1 - |lambda|^2 / 2`, a lower bound for `Re psi` everywhere.
    pub re_floor: f64,
    pub eps1: f64,
    /// `-sum_{i<j<k} lambda_ij lambda_jk lambda_ki`.
    pub im_cubic: f64,
    pub eps2: f64,
    pub bound_eps1: f64,
    pub bound_eps2: f64,
}

impl EstimateReport {
    pub fn re_floor_holds(&self) -> bool {
        self.psi.re >= self.re_floor - BOUND_SLACK
    }

    pub fn eps1_holds(&self) -> bool {
        self.eps1.abs() <= self.bound_eps1 + BOUND_SLACK
    }

    pub fn eps2_holds(&self) -> bool {
        self.eps2.abs() <= self.bound_eps2 + BOUND_SLACK
    }

    pub fn all_hold(&self) -> bool {
        self.re_floor_holds() && self.eps1_holds() && self.eps2_holds()
    }
}

/// Evaluates `psi` at `lambda` in `B_delta` and splits it into the Gaussian
/// and cubic leading terms plus the remainders `eps1`, `eps2`.
pub fn psi_power_real_bounds(
    params: &Parameters,
    lambda: &TorusPoint,
    delta: f64,
) -> Result<EstimateReport> {
    if params.n < 3 {
        return Err(Error::InvalidParameters(format!(
            "local estimates need n >= 3, got {}",
            params.n
        )));
    }
    if !(delta > 0.0 && delta < PI / 4.0) {
        return Err(Error::InvalidDelta(delta));
    }
    let cf = CharFn::new(params.n)?;
    cf.check_dim(lambda)?;
    if lambda.max_abs() > delta {
        return Err(Error::OutOfRegion { delta });
    }
    Ok(estimate_with(&cf, lambda, delta))
}

pub(crate) fn estimate_with(cf: &CharFn, lambda: &TorusPoint, delta: f64) -> EstimateReport {
    let n = cf.n();
    let psi = cf.eval(lambda.as_slice());
    let norm_sq = lambda.norm_sq();
    let re_gauss = (-0.5 * norm_sq).exp();
    let im_cubic = -triangle_sum(n, lambda.as_slice());
    let nd = n as f64 * delta;
    let nd4 = nd.powi(4);
    EstimateReport {
        lambda: lambda.clone(),
        delta,
        psi,
        re_gauss,
        re_floor: 1.0 - 0.5 * norm_sq,
        eps1: psi.re / re_gauss - 1.0,
        im_cubic,
        eps2: psi.im - im_cubic,
        bound_eps1: nd4 / 12.0 * (0.5 * nd * nd).exp(),
        bound_eps2: nd4 / 12.0,
    }
}

/// `1/2 + 1/2 prod_{i != k} cos(2 lambda_ik)`, an upper bound for `|psi|^2`.
pub fn psi_magnitude_bound(params: &Parameters, lambda: &TorusPoint, k: usize) -> Result<f64> {
    let n = params.n;
    if !(1..=n).contains(&k) {
        return Err(Error::BadRowIndex { k, n });
    }
    if lambda.dim() != params.d() {
        return Err(Error::DimensionMismatch {
            expected: params.d(),
            got: lambda.dim(),
        });
    }
    Ok(magnitude_bound_raw(n, lambda.as_slice(), k))
}

pub(crate) fn magnitude_bound_raw(n: usize, lambda: &[f64], k: usize) -> f64 {
    let prod: f64 = (1..=n)
        .filter(|&i| i != k)
        .map(|i| {
            let (a, b) = if i < k { (i, k) } else { (k, i) };
            (2.0 * lambda[pair_flat(n, a, b)]).cos()
        })
        .product();
    0.5 + 0.5 * prod
}

/// Smallest of the row bounds over `k = 1..=n`.
pub fn psi_magnitude_bound_min(params: &Parameters, lambda: &TorusPoint) -> Result<f64> {
    (1..=params.n)
        .map(|k| psi_magnitude_bound(params, lambda, k))
        .try_fold(f64::INFINITY, |m, b| b.map(|b| m.min(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn params(n: usize) -> Parameters {
        Parameters::new(n, 0).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng, d: usize, r: f64) -> TorusPoint {
        TorusPoint::new((0..d).map(|_| rng.random_range(-r..=r)).collect()).unwrap()
    }

    #[test]
    fn psi_at_origin_is_one() {
        for n in 2..=6 {
            let p = params(n);
            let v = psi(&p, &TorusPoint::zeros(p.d())).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn psi_on_the_triangle_point_is_minus_i() {
        let p = params(3);
        let v = psi(&p, &TorusPoint::new(vec![FRAC_PI_2; 3]).unwrap()).unwrap();
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn psi_at_all_pi_matches_brute_force() {
        // Increments of n = 3 have coordinate sums 3, -1, -1, -1, so every
        // phase is an odd multiple of pi.
        let p = params(3);
        let sums = [3.0f64, -1.0, -1.0, -1.0];
        let oracle: Complex64 = sums
            .iter()
            .map(|s| Complex64::from_polar(1.0, PI * s))
            .sum::<Complex64>()
            / 4.0;
        let v = psi(&p, &TorusPoint::new(vec![PI; 3]).unwrap()).unwrap();
        assert!((v - oracle).norm() < 1e-12);
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(matches!(
            psi(&params(4), &TorusPoint::zeros(3)),
            Err(Error::DimensionMismatch { expected: 6, got: 3 })
        ));
    }

    #[test]
    fn factorized_route_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=6 {
            let cf = CharFn::new(n).unwrap();
            for _ in 0..50 {
                let l = random_point(&mut rng, cf.d(), PI);
                let direct = cf.eval(l.as_slice());
                for k in 1..=n {
                    let f = cf.eval_factorized(l.as_slice(), k);
                    assert!((direct - f).norm() < 1e-13, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 2..=6 {
            let cf = CharFn::new(n).unwrap();
            for _ in 0..200 {
                let l = random_point(&mut rng, cf.d(), PI);
                let a = cf.eval(l.as_slice());
                let b = cf.eval(l.neg().as_slice());
                assert!((a.conj() - b).norm() < 1e-13);
                assert!(a.norm_sqr() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn estimate_report_at_origin() {
        let r = psi_power_real_bounds(&params(4), &TorusPoint::zeros(6), 0.1).unwrap();
        assert_eq!(r.eps1, 0.0);
        assert_eq!(r.eps2, 0.0);
        assert_eq!(r.im_cubic, 0.0);
        assert!(r.all_hold());
    }

    #[test]
    fn eps2_small_at_diagonal_point() {
        let r = psi_power_real_bounds(&params(3), &TorusPoint::new(vec![0.05; 3]).unwrap(), 0.05)
            .unwrap();
        assert!(r.eps2.abs() <= 0.15f64.powi(4) / 12.0);
        assert!(r.all_hold());
    }

    #[test]
    fn estimate_preconditions() {
        let p = params(3);
        let l = TorusPoint::new(vec![0.2, 0.0, 0.0]).unwrap();
        assert!(matches!(
            psi_power_real_bounds(&p, &l, 0.1),
            Err(Error::OutOfRegion { .. })
        ));
        assert!(matches!(
            psi_power_real_bounds(&p, &l, 1.0),
            Err(Error::InvalidDelta(_))
        ));
        assert!(matches!(
            psi_power_real_bounds(&p, &l, 0.0),
            Err(Error::InvalidDelta(_))
        ));
        assert!(psi_power_real_bounds(&params(2), &TorusPoint::zeros(1), 0.1).is_err());
    }

    #[test]
    fn estimates_hold_on_random_boxes() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 3..=5 {
            let p = params(n);
            let cf = CharFn::new(n).unwrap();
            for &delta in &[0.01, 0.05, 0.1] {
                for _ in 0..1000 {
                    let l = random_point(&mut rng, p.d(), delta);
                    let r = estimate_with(&cf, &l, delta);
                    assert!(r.all_hold(), "n={n} delta={delta} {r:?}");
                }
            }
        }
    }

    #[test]
    fn magnitude_bound_examples() {
        let p = params(3);
        assert_eq!(psi_magnitude_bound(&p, &TorusPoint::zeros(3), 1).unwrap(), 1.0);
        let l = TorusPoint::new(vec![PI / 4.0, 0.0, 0.0]).unwrap();
        assert!((psi_magnitude_bound(&p, &l, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            psi_magnitude_bound(&p, &l, 4),
            Err(Error::BadRowIndex { k: 4, n: 3 })
        ));
    }

    #[test]
    fn magnitude_bound_dominates_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let p = params(4);
        let cf = CharFn::new(4).unwrap();
        for _ in 0..10_000 {
            let l = random_point(&mut rng, p.d(), PI);
            let m2 = cf.eval(l.as_slice()).norm_sqr();
            let b = psi_magnitude_bound_min(&p, &l).unwrap();
            assert!(m2 <= b + 1e-12);
        }
    }
}
