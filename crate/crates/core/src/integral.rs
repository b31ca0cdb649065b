//! The inversion integral `I(d, t) = int_{[-pi, pi]^d} psi(lambda)^t d lambda`
//! and its pieces over the primary boxes and the residual region.
//!
//! `psi^t` is a trigonometric polynomial whose frequency in every coordinate
//! lies in `[-t, t]`, so averaging it over the `(2t+1)^d` tensor grid with
//! nodes `2 pi k / (2t+1)` gives `(2 pi)^{-d} I(d, t)` with no discretization
//! error. On that grid `lambda . m = 2 pi (sum_c k_c m_c) / (2t+1)` and every
//! phase is an index into one table of roots of unity.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::charfn::{CharFn, BOUND_SLACK};
use crate::error::{Error, Result};
use crate::lattice::{Parameters, TorusPoint};
use crate::mc::{run_batches, ComplexMoments, Neumaier};
use crate::unitset::{locate, PieceKind};

pub const DEFAULT_NODE_CAP: u64 = 100_000_000;
pub const MIN_MC_SAMPLES: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IntegralMethod {
    ExactGrid,
    MonteCarlo,
    BoxQuadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralEstimate {
    pub method: IntegralMethod,
    pub n: usize,
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub value: f64,
    pub imag: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error_imag: Option<f64>,
    pub nodes_or_samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl IntegralEstimate {
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value, self.imag)
    }

    /// Standard error of the complex estimate as a whole.
    pub fn combined_error(&self) -> f64 {
        let a = self.std_error.unwrap_or(0.0);
        let b = self.std_error_imag.unwrap_or(0.0);
        a.hypot(b)
    }
}

/// `(2 pi)^{-d} I(d, t)` on the exact grid, with the default node cap.
pub fn inversion_exact_grid(params: &Parameters, t: usize) -> Result<IntegralEstimate> {
    inversion_exact_grid_capped(params, t, DEFAULT_NODE_CAP)
}

pub fn inversion_exact_grid_capped(params: &Parameters, t: usize, cap: u64) -> Result<IntegralEstimate> {
    let cf = CharFn::new(params.n)?;
    let d = cf.d();
    let nodes_axis = 2 * t + 1;
    let nodes = (nodes_axis as f64).powi(d as i32);
    if nodes > cap as f64 {
        return Err(Error::NodeCapExceeded { nodes, cap });
    }
    let big_n = nodes_axis;
    let roots: Vec<Complex64> = (0..big_n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / big_n as f64))
        .collect();
    // Per-increment coordinate steps, reduced mod N so they are nonnegative.
    let inc: Vec<Vec<usize>> = cf
        .increments()
        .rows()
        .map(|row| row.iter().map(|&m| if m > 0 { 1 } else { big_n - 1 }).collect())
        .collect();
    let n_inc = inc.len();
    let inv = 1.0 / n_inc as f64;
    let exp = t as u32;

    // One slab per value of the first coordinate; slabs summed in order.
    let slab = |k0: usize| -> (Neumaier, Neumaier) {
        let mut re = Neumaier::default();
        let mut im = Neumaier::default();
        let mut outer = vec![0usize; d];
        outer[0] = k0;
        let mut base: Vec<usize> = vec![0; n_inc];
        let mut cur: Vec<usize> = vec![0; n_inc];
        loop {
            // phases from all but the last coordinate
            for (i, b) in base.iter_mut().enumerate() {
                let mut p = 0usize;
                for c in 0..d - 1 {
                    p += outer[c] * inc[i][c];
                }
                *b = p % big_n;
            }
            cur.copy_from_slice(&base);
            for _ in 0..big_n {
                let mut psi = Complex64::new(0.0, 0.0);
                for (i, p) in cur.iter_mut().enumerate() {
                    psi += roots[*p];
                    *p += inc[i][d - 1];
                    if *p >= big_n {
                        *p -= big_n;
                    }
                }
                let v = (psi * inv).powu(exp);
                re.add(v.re);
                im.add(v.im);
            }
            // advance coordinates 1..d-1 (coordinate 0 is fixed per slab)
            let mut c = d as isize - 2;
            while c >= 1 {
                outer[c as usize] += 1;
                if outer[c as usize] < big_n {
                    break;
                }
                outer[c as usize] = 0;
                c -= 1;
            }
            if c < 1 {
                break;
            }
        }
        (re, im)
    };

    let parts: Vec<(Neumaier, Neumaier)> = if d == 1 {
        // single coordinate: one slab holds the whole grid
        vec![{
            let mut re = Neumaier::default();
            let mut im = Neumaier::default();
            for k in 0..big_n {
                let mut psi = Complex64::new(0.0, 0.0);
                for row in &inc {
                    psi += roots[k * row[0] % big_n];
                }
                let v = (psi * inv).powu(exp);
                re.add(v.re);
                im.add(v.im);
            }
            (re, im)
        }]
    } else {
        (0..big_n).into_par_iter().map(slab).collect()
    };
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for (r, i) in parts {
        re += r;
        im += i;
    }
    Ok(IntegralEstimate {
        method: IntegralMethod::ExactGrid,
        n: params.n,
        t,
        delta: None,
        value: re.value() / nodes,
        imag: im.value() / nodes,
        std_error: None,
        std_error_imag: None,
        nodes_or_samples: nodes as u64,
        seed: None,
        elapsed_ms: None,
    })
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::BadInput(format!(
            "need at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

/// Monte Carlo estimate of `int_{B_radius(center)} psi^t`, uniform sampling
/// over the box.
pub fn integrate_box_mc(
    params: &Parameters,
    t: usize,
    center: &TorusPoint,
    radius: f64,
    samples: u64,
    seed: u64,
) -> Result<IntegralEstimate> {
    if !(radius > 0.0 && radius <= PI) {
        return Err(Error::InvalidRadius(radius));
    }
    check_samples(samples)?;
    let cf = CharFn::new(params.n)?;
    let d = cf.d();
    if center.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: center.dim(),
        });
    }
    let c = center.as_slice();
    let exp = t as u32;
    let m = run_batches(samples, seed, |rng, len| {
        let mut acc = ComplexMoments::default();
        let mut x = vec![0.0; d];
        for _ in 0..len {
            for (xi, ci) in x.iter_mut().zip(c) {
                *xi = ci + rng.random_range(-radius..radius);
            }
            let v = cf.eval(&x).powu(exp);
            acc.push(v.re, v.im);
        }
        acc
    });
    let vol = (2.0 * radius).powi(d as i32);
    let (mr, mi, sr, si) = m.summary();
    Ok(IntegralEstimate {
        method: IntegralMethod::MonteCarlo,
        n: params.n,
        t,
        delta: Some(radius),
        value: vol * mr,
        imag: vol * mi,
        std_error: Some(vol * sr),
        std_error_imag: Some(vol * si),
        nodes_or_samples: samples,
        seed: Some(seed),
        elapsed_ms: None,
    })
}

/// Tensor midpoint rule for `int_{B_radius(center)} psi^t`, `k` nodes per axis.
pub fn integrate_box_midpoint(
    params: &Parameters,
    t: usize,
    center: &TorusPoint,
    radius: f64,
    k: usize,
) -> Result<IntegralEstimate> {
    if !(radius > 0.0 && radius <= PI) {
        return Err(Error::InvalidRadius(radius));
    }
    let cf = CharFn::new(params.n)?;
    let d = cf.d();
    let nodes = (k as f64).powi(d as i32);
    if k == 0 || nodes > DEFAULT_NODE_CAP as f64 {
        return Err(Error::NodeCapExceeded {
            nodes,
            cap: DEFAULT_NODE_CAP,
        });
    }
    let h = 2.0 * radius / k as f64;
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    loop {
        for c in 0..d {
            x[c] = center.as_slice()[c] - radius + (idx[c] as f64 + 0.5) * h;
        }
        let v = cf.eval(&x).powu(t as u32);
        re.add(v.re);
        im.add(v.im);
        let mut c = 0;
        while c < d {
            idx[c] += 1;
            if idx[c] < k {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
        if c == d {
            break;
        }
    }
    let w = h.powi(d as i32);
    Ok(IntegralEstimate {
        method: IntegralMethod::BoxQuadrature,
        n: params.n,
        t,
        delta: Some(radius),
        value: re.value() * w,
        imag: im.value() * w,
        std_error: None,
        std_error_imag: None,
        nodes_or_samples: nodes as u64,
        seed: None,
        elapsed_ms: None,
    })
}

fn check_residual_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= FRAC_PI_4) {
        return Err(Error::InvalidDelta(delta));
    }
    Ok(())
}

/// Monte Carlo estimate of `int_{R_delta} psi^t`: uniform over the whole
/// torus, keeping samples that the box decomposition places in the residual.
pub fn integrate_residual_mc(
    params: &Parameters,
    t: usize,
    delta: f64,
    samples: u64,
    seed: u64,
) -> Result<IntegralEstimate> {
    Ok(residual_pass(params, t, delta, samples, seed)?.estimate)
}

struct ResidualPass {
    estimate: IntegralEstimate,
    pointwise_checked: u64,
    pointwise_violations: u64,
    max_excess: f64,
}

#[derive(Default)]
struct ResidualAcc {
    moments: ComplexMoments,
    checked: u64,
    violations: u64,
    max_excess: f64,
}

impl std::ops::AddAssign for ResidualAcc {
    fn add_assign(&mut self, o: Self) {
        self.moments += o.moments;
        self.checked += o.checked;
        self.violations += o.violations;
        self.max_excess = self.max_excess.max(o.max_excess);
    }
}

fn residual_pass(params: &Parameters, t: usize, delta: f64, samples: u64, seed: u64) -> Result<ResidualPass> {
    check_residual_delta(delta)?;
    check_samples(samples)?;
    let cf = CharFn::new(params.n)?;
    let n = params.n;
    let d = cf.d();
    let exp = t as u32;
    let cap = delta.cos().powi(2);
    // test the location routine once up front so the hot loop can unwrap
    locate(n, delta, &vec![0.0; d])?;
    let acc = run_batches(samples, seed, |rng, len| {
        let mut acc = ResidualAcc::default();
        let mut x = vec![0.0; d];
        for _ in 0..len {
            for xi in x.iter_mut() {
                *xi = rng.random_range(-PI..PI);
            }
            let kind = locate(n, delta, &x).expect("validated").kind;
            if kind == PieceKind::Primary {
                acc.moments.push(0.0, 0.0);
                continue;
            }
            let psi = cf.eval(&x);
            let sq = psi.norm_sqr();
            acc.checked += 1;
            if sq > cap + BOUND_SLACK {
                acc.violations += 1;
            }
            acc.max_excess = acc.max_excess.max(sq - cap);
            let v = psi.powu(exp);
            acc.moments.push(v.re, v.im);
        }
        acc
    });
    let vol = (2.0 * PI).powi(d as i32);
    let (mr, mi, sr, si) = acc.moments.summary();
    Ok(ResidualPass {
        estimate: IntegralEstimate {
            method: IntegralMethod::MonteCarlo,
            n,
            t,
            delta: Some(delta),
            value: vol * mr,
            imag: vol * mi,
            std_error: Some(vol * sr),
            std_error_imag: Some(vol * si),
            nodes_or_samples: samples,
            seed: Some(seed),
            elapsed_ms: None,
        },
        pointwise_checked: acc.checked,
        pointwise_violations: acc.violations,
        max_excess: if acc.checked == 0 { f64::NEG_INFINITY } else { acc.max_excess },
    })
}

/// Residual-region integral against `exp(-(11/24) t delta^2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub n: usize,
    pub t: usize,
    pub delta: f64,
    /// `|(2 pi)^{-d} int_{R_delta} psi^t|`, estimated.
    pub magnitude: f64,
    pub std_error: f64,
    pub bound: f64,
    /// `magnitude - 3 std_error <= bound`.
    pub holds: bool,
    /// Samples in `R_delta` checked against `|psi|^2 <= cos^2 delta`.
    pub pointwise_checked: u64,
    pub pointwise_violations: u64,
    /// Largest `|psi|^2 - cos^2 delta` seen.
    pub max_excess: f64,
    pub samples: u64,
    pub seed: u64,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.holds && self.pointwise_violations == 0
    }
}

pub fn residual_bound_check(
    params: &Parameters,
    t: usize,
    delta: f64,
    samples: u64,
    seed: u64,
) -> Result<ResidualReport> {
    let pass = residual_pass(params, t, delta, samples, seed)?;
    let norm = (2.0 * PI).powi(params.d() as i32);
    let magnitude = pass.estimate.complex().norm() / norm;
    let std_error = pass.estimate.combined_error() / norm;
    let bound = (-(11.0 / 24.0) * t as f64 * delta * delta).exp();
    Ok(ResidualReport {
        n: params.n,
        t,
        delta,
        magnitude,
        std_error,
        bound,
        holds: magnitude - 3.0 * std_error <= bound,
        pointwise_checked: pass.pointwise_checked,
        pointwise_violations: pass.pointwise_violations,
        max_excess: pass.max_excess,
        samples,
        seed,
    })
}

/// `J(d, t, delta) = int_{B_delta} exp(-(t/2)|gamma|^2)` with its two-sided
/// envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianBox {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
}

impl GaussianBox {
    pub fn strictly_inside(&self) -> bool {
        self.lower < self.value && self.value < self.upper
    }
}

pub fn gaussian_box_integral(d: usize, t: usize, delta: f64) -> Result<GaussianBox> {
    if t == 0 {
        return Err(Error::InvalidParameters("t must be at least 1".into()));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidDelta(delta));
    }
    let tf = t as f64;
    let scale = (2.0 * PI / tf).sqrt();
    let one_dim = scale * libm::erf(delta * (tf / 2.0).sqrt());
    let half_d = d as f64 / 2.0;
    let full = (2.0 * PI / tf).powf(half_d);
    Ok(GaussianBox {
        lower: full * (-(-tf * delta * delta / 2.0).exp_m1()).powf(half_d),
        upper: full * (-(-tf * delta * delta).exp_m1()).powf(half_d),
        value: one_dim.powi(d as i32),
    })
}
