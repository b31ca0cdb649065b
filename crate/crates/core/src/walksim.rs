//! Direct simulation of the walk and moment checks for a single increment.

use rand::Rng;
use serde::Serialize;

use crate::charfn::triangle_sum;
use crate::error::{Error, Result};
use crate::lattice::{IncrementTable, Parameters};
use crate::mc::{run_batches, Neumaier};

pub const DEFAULT_STEP_BUDGET: u128 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    pub t: usize,
    pub chains: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(n: usize, t: usize, chains: u64, seed: u64) -> Result<Self> {
        Parameters::new(n, t)?;
        if chains == 0 {
            return Err(Error::InvalidParameters("chains must be at least 1".into()));
        }
        Ok(Self { n, t, chains, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub n: usize,
    pub t: usize,
    pub chains: u64,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Default)]
struct Hits(u64);

impl std::ops::AddAssign for Hits {
    fn add_assign(&mut self, o: Self) {
        self.0 += o.0;
    }
}

/// Fraction of `chains` independent `t`-step walks that end at the origin.
pub fn simulate_return_prob(cfg: &SimConfig) -> Result<SimResult> {
    simulate_return_prob_with_budget(cfg, DEFAULT_STEP_BUDGET)
}

pub fn simulate_return_prob_with_budget(cfg: &SimConfig, budget: u128) -> Result<SimResult> {
    let steps = u128::from(cfg.chains) * cfg.t as u128;
    if steps > budget {
        return Err(Error::BudgetExceeded { steps, budget });
    }
    if cfg.chains == 0 {
        return Err(Error::InvalidParameters("chains must be at least 1".into()));
    }
    let table = IncrementTable::new(cfg.n)?;
    let d = table.d();
    let pick = (table.len() - 1) as u32;
    let t = cfg.t;
    let hits = run_batches(cfg.chains, cfg.seed, |rng, len| {
        let mut pos = vec![0i32; d];
        let mut hits = 0;
        for _ in 0..len {
            pos.fill(0);
            for _ in 0..t {
                let row = table.row((rng.random::<u32>() & pick) as usize);
                for (p, &m) in pos.iter_mut().zip(row) {
                    *p += i32::from(m);
                }
            }
            if pos.iter().all(|&p| p == 0) {
                hits += 1;
            }
        }
        Hits(hits)
    })
    .0;
    let estimate = hits as f64 / cfg.chains as f64;
    Ok(SimResult {
        n: cfg.n,
        t: cfg.t,
        chains: cfg.chains,
        hits,
        estimate,
        stderr: (estimate * (1.0 - estimate) / cfg.chains as f64).sqrt(),
        seed: cfg.seed,
        elapsed_ms: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub order: u32,
    pub sample_mean: f64,
    pub stderr: f64,
    /// Closed form: `0`, `|lambda|^2`, `6 sum_{i<j<k} lambda_ij lambda_jk lambda_ik`.
    pub expected: f64,
    /// Average over all of `V_n`.
    pub enumerated: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub lambda: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
    pub moments: Vec<MomentCheck>,
}

impl MomentReport {
    pub fn passed(&self) -> bool {
        self.moments.iter().all(|m| m.pass)
    }
}

/// Moments of `lambda . Z(xi)` for a random unit `lambda` drawn from `seed`.
pub fn increment_moment_check(n: usize, samples: u64, seed: u64) -> Result<MomentReport> {
    let d = Parameters::new(n, 0)?.d();
    let mut rng = crate::mc::batch_rng(seed, u64::MAX);
    let mut lambda: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
    lambda.iter_mut().for_each(|x| *x /= norm);
    increment_moment_check_at(n, &lambda, samples, seed)
}

#[derive(Default)]
struct Powers([Neumaier; 6]);

impl std::ops::AddAssign for Powers {
    fn add_assign(&mut self, o: Self) {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
    }
}

/// Moments of `lambda . Z(xi)` for `xi` uniform on `V_n`, by sampling and by
/// full enumeration.
pub fn increment_moment_check_at(n: usize, lambda: &[f64], samples: u64, seed: u64) -> Result<MomentReport> {
    let params = Parameters::new(n, 0)?;
    let d = params.d();
    if lambda.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: lambda.len(),
        });
    }
    if samples < 2 {
        return Err(Error::BadInput("need at least two samples".into()));
    }
    let table = IncrementTable::new(n)?;
    let dots: Vec<f64> = table
        .rows()
        .map(|row| row.iter().zip(lambda).map(|(&m, &l)| f64::from(m) * l).sum())
        .collect();
    // Z(-y) = Z(y), so the canonical half of V_n carries the same law.
    let enumerated = |k: i32| dots.iter().map(|x| x.powi(k)).sum::<f64>() / dots.len() as f64;
    let pick = (1u64 << n) - 1;
    let acc = run_batches(samples, seed, |rng, len| {
        let mut p = Powers::default();
        for _ in 0..len {
            // xi uniform on all of V_n; bit 0 is y_1
            let bits = rng.random::<u64>() & pick;
            let canon = if bits & 1 == 1 { !bits & pick } else { bits };
            let x = dots[(canon >> 1) as usize];
            let (x2, x3) = (x * x, x * x * x);
            p.0[0].add(x);
            p.0[1].add(x2);
            p.0[2].add(x3);
            p.0[3].add(x2);
            p.0[4].add(x2 * x2);
            p.0[5].add(x3 * x3);
        }
        p
    });
    let s = samples as f64;
    let expected = [
        0.0,
        lambda.iter().map(|x| x * x).sum::<f64>(),
        6.0 * triangle_sum(n, lambda),
    ];
    let moments = (0..3)
        .map(|k| {
            let mean = acc.0[k].value() / s;
            let second = acc.0[k + 3].value() / s;
            let var = ((second - mean * mean) * s / (s - 1.0)).max(0.0);
            let stderr = (var / s).sqrt();
            let exp = expected[k];
            let pass = if stderr == 0.0 {
                (mean - exp).abs() <= 1e-12
            } else {
                (mean - exp).abs() <= 5.0 * stderr + 1e-12
            };
            MomentCheck {
                order: k as u32 + 1,
                sample_mean: mean,
                stderr,
                expected: exp,
                enumerated: enumerated(k as i32 + 1),
                pass,
            }
        })
        .collect();
    Ok(MomentReport {
        n,
        lambda: lambda.to_vec(),
        samples,
        seed,
        moments,
    })
}
