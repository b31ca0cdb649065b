//! Closed-form envelopes for the return probability and the thresholds built
//! on them.
//!
//! Every formula takes an explicit step count `steps` (the number of columns).
//! The sandwich envelopes are only claimed for `steps` divisible by 4, and the
//! public `u_bound` / `l_bound` insist on that. Everything is evaluated through
//! logarithms first so that step counts like `n^12` do not overflow.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{count_closed_form, count_exact_dp, log2_big, ratio_f64, CountResult};
use crate::lattice::{pair_count, Parameters};

/// Slack allowed when comparing the exact probability against the sandwich.
pub const SANDWICH_SLACK: f64 = 1e-12;

/// Points in the sandwich `delta` sweep.
pub const DELTA_GRID_POINTS: usize = 25;
pub const DELTA_GRID_MIN: f64 = 1e-3;

/// `log(1 - e^{-x})` for `x > 0`.
#[inline]
fn ln_one_minus_exp_neg(x: f64) -> f64 {
    (-(-x).exp_m1()).ln()
}

#[inline]
fn logsumexp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn check_steps(t4: usize) -> Result<()> {
    if t4 == 0 || t4 % 4 != 0 {
        return Err(Error::BadStepCount(t4));
    }
    Ok(())
}

fn check_delta(n: usize, delta: f64) -> Result<()> {
    let nd = n as f64 * delta;
    if !(nd > 0.0 && nd < 1.0) {
        return Err(Error::BadDelta(nd));
    }
    Ok(())
}

/// `log U` for an arbitrary step count.
pub fn ln_u_steps(n: usize, steps: f64, delta: f64) -> f64 {
    let nd = n as f64 * delta;
    let d = pair_count(n) as f64;
    0.5 * steps * (nd.powi(6) / 9.0).ln_1p()
        + steps * (nd.powi(4) / 12.0).ln_1p()
        + 0.5 * d * ln_one_minus_exp_neg(steps * delta * delta)
}

/// `log L` for an arbitrary step count.
pub fn ln_l_steps(n: usize, steps: f64, delta: f64) -> f64 {
    let nd = n as f64 * delta;
    let d = pair_count(n) as f64;
    -0.5 * (4.0 / 9.0 * steps * steps * nd.powi(6)).ln_1p()
        + steps * (-nd.powi(4) / 12.0).ln_1p()
        + 0.5 * d * ln_one_minus_exp_neg(0.5 * steps * delta * delta)
}

/// `log A(n, steps)`, `A = 2^{2d-n+1} (2 pi steps)^{-d/2}`.
pub fn ln_a(n: usize, steps: f64) -> f64 {
    let d = pair_count(n) as f64;
    (2.0 * d - n as f64 + 1.0) * LN_2 - 0.5 * d * (2.0 * PI * steps).ln()
}

/// `log` of the residual term `exp(-(11/24) steps delta^2)`.
#[inline]
pub fn ln_residual(steps: f64, delta: f64) -> f64 {
    -(11.0 / 24.0) * steps * delta * delta
}

/// The lower envelope applies only when `steps (n delta)^3 < 1`.
#[inline]
pub fn lower_gate(n: usize, steps: f64, delta: f64) -> bool {
    steps * (n as f64 * delta).powi(3) < 1.0
}

/// Upper envelope `U(n, t4, delta)`.
pub fn u_bound(n: usize, t4: usize, delta: f64) -> Result<f64> {
    check_steps(t4)?;
    check_delta(n, delta)?;
    Ok(ln_u_steps(n, t4 as f64, delta).exp())
}

/// Lower envelope `L(n, t4, delta)` and whether it applies.
pub fn l_bound(n: usize, t4: usize, delta: f64) -> Result<(f64, bool)> {
    check_steps(t4)?;
    check_delta(n, delta)?;
    Ok((
        ln_l_steps(n, t4 as f64, delta).exp(),
        lower_gate(n, t4 as f64, delta),
    ))
}

/// `A(n, steps)`.
pub fn normalizer(n: usize, steps: usize) -> f64 {
    ln_a(n, steps as f64).exp()
}

/// `log2` of `2^{2d-n+n t4+1} (2 pi t4)^{-d/2}`.
pub fn asymptotic_count_log2(params: &Parameters, t4: usize) -> Result<f64> {
    check_steps(t4)?;
    let n = params.n as f64;
    let d = params.d() as f64;
    Ok(2.0 * d - n + n * t4 as f64 + 1.0 - 0.5 * d * (2.0 * PI * t4 as f64).log2())
}

/// Leading-order count of `n x t4` partial Hadamard matrices (`inf` if it
/// does not fit a double).
pub fn asymptotic_count(params: &Parameters, t4: usize) -> Result<f64> {
    Ok(asymptotic_count_log2(params, t4)?.exp2())
}

/// `2^{C(n+1, 2)}`, the cap on the number of Hadamard matrices of order `n`.
pub fn branching_bound(params: &Parameters) -> BigUint {
    BigUint::one() << pair_count(params.n + 1)
}

/// One link `P_{n-1} -> P_n` of the branching chain at a fixed step count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchingStep {
    pub n: usize,
    pub t: usize,
    pub p_n: f64,
    pub p_prev: f64,
    /// `P_n <= 2^{-(n-1)} P_{n-1}`.
    pub holds: bool,
    /// `P_n <= 2^{n-1-t} P_{n-1}`, recorded for comparison.
    pub literal_holds: bool,
}

/// Checks one link exactly. `p_prev` is `P_{n-1}^t(0,0)`, with `P_1 = 1`.
pub fn branching_step(n: usize, t: usize, p_n: &BigRational, p_prev: &BigRational) -> BranchingStep {
    let pow2 = |e: usize| BigRational::from_integer((BigUint::one() << e).into());
    let holds = p_n * pow2(n - 1) <= *p_prev;
    // 2^{n-1-t} P_prev  <=>  P_n 2^t <= 2^{n-1} P_prev
    let literal_holds = p_n * pow2(t) <= p_prev * pow2(n - 1);
    BranchingStep {
        n,
        t,
        p_n: ratio_f64(p_n),
        p_prev: ratio_f64(p_prev),
        holds,
        literal_holds,
    }
}

/// Exact count for `(n, t)`: closed form when there is one, otherwise the
/// convolution.
pub fn exact_count(params: &Parameters) -> Result<CountResult> {
    let no_count = |e: Error| Error::NoExactCount {
        n: params.n,
        t: params.t,
        reason: e.to_string(),
    };
    if params.n <= 3 && params.t % 4 == 0 {
        return count_closed_form(params).map_err(no_count);
    }
    count_exact_dp(params).map_err(no_count)
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// All envelopes at one `(n, t, delta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub t: usize,
    pub delta: f64,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "A")]
    pub a: f64,
    /// `exp(-(11/24) t delta^2)`, the residual term of the sandwich.
    pub residual: f64,
    /// `N_{n,t} / (2^{nt} A(n, t))`.
    pub ratio_r: Option<f64>,
    pub exact_prob: Option<f64>,
    pub asym_log2: f64,
    #[serde(serialize_with = "ser_big")]
    pub branching_cap: BigUint,
    pub lower_valid: bool,
    pub upper_holds: Option<bool>,
    pub lower_holds: Option<bool>,
}

impl BoundsReport {
    pub fn new(params: &Parameters, t4: usize, delta: f64, exact: Option<&CountResult>) -> Result<Self> {
        let n = params.n;
        let u = u_bound(n, t4, delta)?;
        let (l, lower_valid) = l_bound(n, t4, delta)?;
        let a = normalizer(n, t4);
        let residual = ln_residual(t4 as f64, delta).exp();
        let exact_prob = exact.map(|c| c.prob_f64());
        let (upper_holds, lower_holds) = match exact_prob {
            Some(p) => (
                Some(p <= a * u + residual + SANDWICH_SLACK),
                Some(!lower_valid || p >= a * l - residual - SANDWICH_SLACK),
            ),
            None => (None, None),
        };
        Ok(Self {
            n,
            t: t4,
            delta,
            u,
            l,
            a,
            residual,
            ratio_r: exact_prob.map(|p| p / a),
            exact_prob,
            asym_log2: asymptotic_count_log2(params, t4)?,
            branching_cap: branching_bound(params),
            lower_valid,
            upper_holds,
            lower_holds,
        })
    }

    /// Sandwich in normalized form, `L - res/A <= R <= U + res/A`.
    pub fn normalized_holds(&self) -> Option<bool> {
        let r = self.ratio_r?;
        let slack = self.residual / self.a + SANDWICH_SLACK / self.a;
        let up = r <= self.u + slack;
        let low = !self.lower_valid || r >= self.l - slack;
        Some(up && low)
    }

    pub fn holds(&self) -> Option<bool> {
        Some(self.upper_holds? && self.lower_holds?)
    }
}

pub const BOUNDS_CSV_HEADER: &str = "n,t,delta,L,exactR,U,asym_log2,exact_log2,branching_log2";

/// Geometric grid of `delta` values on `[1e-3, min(pi/4, 0.999/n)]`.
pub fn delta_grid(n: usize) -> Vec<f64> {
    let hi = (PI / 4.0).min(0.999 / n as f64);
    let lo = DELTA_GRID_MIN.min(hi);
    let k = DELTA_GRID_POINTS - 1;
    (0..=k)
        .map(|i| lo * (hi / lo).powf(i as f64 / k as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub t: usize,
    pub exact_prob: f64,
    pub points: Vec<BoundsReport>,
    /// Index into `points` with the smallest upper envelope `A U + res`.
    pub tightest: usize,
    pub all_hold: bool,
}

impl SandwichReport {
    pub fn tightest(&self) -> &BoundsReport {
        &self.points[self.tightest]
    }
}

/// Checks the sandwich against the exact return probability over the `delta` grid.
pub fn sandwich(params: &Parameters, t4: usize) -> Result<SandwichReport> {
    if params.n < 3 {
        return Err(Error::InvalidParameters(format!(
            "the sandwich needs n >= 3, got {}",
            params.n
        )));
    }
    check_steps(t4)?;
    let exact = exact_count(&params.with_t(t4))?;
    let points = delta_grid(params.n)
        .into_iter()
        .map(|delta| BoundsReport::new(params, t4, delta, Some(&exact)))
        .collect::<Result<Vec<_>>>()?;
    let all_hold = points.iter().all(|r| r.holds() == Some(true));
    let tightest = points
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (a.a * a.u + a.residual).total_cmp(&(b.a * b.u + b.residual)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(SandwichReport {
        n: params.n,
        t: t4,
        exact_prob: exact.prob_f64(),
        points,
        tightest,
        all_hold,
    })
}

/// Golden-section search on `ln delta`, maximizing `f` over `[lo, hi]`.
fn golden_max(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c.exp()), f(d.exp()));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d.exp());
        }
    }
    if fc >= fd {
        (c.exp(), fc)
    } else {
        (d.exp(), fd)
    }
}

/// Grid search over a geometric `delta` grid followed by three golden-section
/// steps around the best node.
fn optimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let k = DELTA_GRID_POINTS - 1;
    let grid: Vec<f64> = (0..=k).map(|i| lo * (hi / lo).powf(i as f64 / k as f64)).collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, f(x)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(k)];
    let grid_best = (grid[best], f(grid[best]));
    let refined = golden_max(&f, a, b, 3);
    if refined.1 > grid_best.1 {
        refined
    } else {
        grid_best
    }
}

/// `U(n, t) = min_{delta < 1/n} {U(n, t, delta) + A^{-1} e^{-(11/24) t delta^2}}`,
/// returned as `(value, argmin)`.
pub fn u_optimized(n: usize, steps: usize) -> (f64, f64) {
    let s = steps as f64;
    let la = ln_a(n, s);
    let hi = 0.999 / n as f64;
    let (delta, neg) = optimize(
        |x| -logsumexp(ln_u_steps(n, s, x), ln_residual(s, x) - la).exp(),
        DELTA_GRID_MIN.min(hi),
        hi,
    );
    (-neg, delta)
}

/// `L(n, t) = max_{delta} {L(n, t, delta) - A^{-1} e^{-(11/24) t delta^2}}`
/// over `delta < 1/n` with `t (n delta)^3 < 1`, returned as `(value, argmax)`.
pub fn l_optimized(n: usize, steps: usize) -> (f64, f64) {
    let s = steps as f64;
    let la = ln_a(n, s);
    let gate = (1.0 / s).cbrt() / n as f64;
    let hi = (0.999 / n as f64).min(gate * (1.0 - 1e-9));
    let lo = (DELTA_GRID_MIN / s.max(1.0)).min(hi * 0.5);
    optimize(
        |x| ln_l_steps(n, s, x).exp() - (ln_residual(s, x) - la).exp(),
        lo,
        hi,
    )
}

/// One row of the `(n, t)` summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub t: usize,
    pub delta: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "exactR")]
    pub exact_r: Option<f64>,
    #[serde(rename = "U")]
    pub u: Option<f64>,
    pub asym_log2: Option<f64>,
    pub exact_log2: Option<f64>,
    pub branching_log2: f64,
    pub count: Option<String>,
    pub brute_force: Option<String>,
    pub status: String,
}

pub const TABLE_CSV_HEADER: &str =
    "n,t,delta,L,exactR,U,asym_log2,exact_log2,branching_log2,count,brute_force,status";

fn opt_num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12e}")).unwrap_or_default()
}

impl TableRow {
    pub fn csv_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.t,
            opt_num(self.delta),
            opt_num(self.l),
            opt_num(self.exact_r),
            opt_num(self.u),
            opt_num(self.asym_log2),
            opt_num(self.exact_log2),
            self.branching_log2,
            self.count.as_deref().unwrap_or(""),
            self.brute_force.as_deref().unwrap_or(""),
            self.status
        );
        s
    }
}

/// Builds one table row. `branching_log2` is the log of the branching-chain
/// bound `2^{nt - C(n,2)}` on `N_{n,t}`. `brute` adds the matrix-scan count
/// when it is within its caps.
pub fn table_row(n: usize, t: usize, brute: bool) -> Result<TableRow> {
    let params = Parameters::new(n, t)?;
    let mut notes: Vec<String> = Vec::new();
    let exact = match exact_count(&params) {
        Ok(c) => Some(c),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let brute_force = if brute {
        match crate::exact::brute_force_count(&params) {
            Ok(b) => {
                if let Some(c) = &exact {
                    if c.matrix_count != b.matrix_count {
                        notes.push("brute force disagrees".into());
                    }
                }
                Some(b.matrix_count.to_string())
            }
            Err(_) => None,
        }
    } else {
        None
    };
    let envelopes = t > 0 && t % 4 == 0;
    let (u, delta) = if envelopes {
        let (u, d) = u_optimized(n, t);
        (Some(u), Some(d))
    } else {
        (None, None)
    };
    let l = envelopes.then(|| l_optimized(n, t).0);
    if !envelopes {
        notes.push("envelopes need t divisible by 4".into());
    }
    let exact_r = exact.as_ref().filter(|_| t > 0).map(|c| c.prob_f64() / normalizer(n, t));
    if let (Some(l), Some(r), Some(u)) = (l, exact_r, u) {
        if !(l <= r + SANDWICH_SLACK && r <= u + SANDWICH_SLACK) {
            notes.push("R outside [L, U]".into());
        }
    }
    Ok(TableRow {
        n,
        t,
        delta,
        l,
        exact_r,
        u,
        asym_log2: envelopes.then(|| asymptotic_count_log2(&params, t).ok()).flatten(),
        exact_log2: exact.as_ref().map(|c| log2_big(&c.matrix_count)),
        branching_log2: (n * t) as f64 - params.d() as f64,
        count: exact.as_ref().map(|c| c.matrix_count.to_string()),
        brute_force,
        status: if notes.is_empty() { "ok".into() } else { notes.join("; ") },
    })
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(TABLE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// `log` of `u_1(n, t, delta) = A(n, t)^{-1} e^{-(11/24) t delta^2}`, with
/// `t` and `delta` given by their logarithms.
pub fn ln_u1(n: usize, ln_t: f64, ln_delta: f64) -> f64 {
    let d = pair_count(n) as f64;
    -(2.0 * d - n as f64 + 1.0) * LN_2 + 0.5 * d * ((2.0 * PI).ln() + ln_t)
        - (11.0 / 24.0) * (ln_t + 2.0 * ln_delta).exp()
}

/// `log` of `e^{n^4 t^{-1/2}} + t^{d/2} e^{-(11/24) t^{1/4}}`.
pub fn abundance_rhs_ln(n: usize, ln_t: f64) -> f64 {
    let nf = n as f64;
    let d = pair_count(n) as f64;
    let first = nf.powi(4) * (-0.5 * ln_t).exp();
    let second = 0.5 * d * ln_t - (11.0 / 24.0) * (0.25 * ln_t).exp();
    logsumexp(first, second)
}

/// Largest number of doublings tried past `n^8`.
pub const ABUNDANCE_MAX_DOUBLINGS: usize = 4096;
pub const ABUNDANCE_TARGET: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbundanceReport {
    pub n: usize,
    /// `log2` of the first grid point `n^8`.
    pub start_log2_t: f64,
    /// `log` of the right-hand side at `t = n^8`.
    pub ln_rhs_start: f64,
    /// First `t = n^8 2^k` with right-hand side below `1 + 1e-3`, as `log2 t`.
    pub crossing_log2_t: Option<f64>,
    pub ln_rhs_at_crossing: Option<f64>,
    /// `t_0 = (48 d / 11)^4`, past which the second term decreases, as `log2`.
    pub t0_log2: f64,
    /// Right-hand side never increased along the grid once past `t_0`.
    pub monotone_past_t0: bool,
    /// Largest `log u_1(n, t, t^{-3/8}) - log(t^{d/2} e^{-(11/24) t^{1/4}})` on
    /// the grid; nonpositive when the bound on `u_1` holds everywhere.
    pub u1_max_gap: f64,
}

pub fn abundance_threshold(n: usize) -> Result<AbundanceReport> {
    if n < 3 {
        return Err(Error::InvalidParameters(format!("need n >= 3, got {n}")));
    }
    let d = pair_count(n) as f64;
    let start = 8.0 * (n as f64).ln();
    let t0_ln = 4.0 * (48.0 * d / 11.0).ln();
    let target = ABUNDANCE_TARGET.ln_1p();
    let mut crossing = None;
    let mut monotone = true;
    let mut prev: Option<f64> = None;
    let mut gap = f64::NEG_INFINITY;
    for k in 0..=ABUNDANCE_MAX_DOUBLINGS {
        let ln_t = start + k as f64 * LN_2;
        let v = abundance_rhs_ln(n, ln_t);
        if ln_t >= t0_ln {
            if let Some(p) = prev {
                if v > p {
                    monotone = false;
                }
            }
            prev = Some(v);
        }
        let u1 = ln_u1(n, ln_t, -0.375 * ln_t);
        let cap = 0.5 * d * ln_t - (11.0 / 24.0) * (0.25 * ln_t).exp();
        gap = gap.max(u1 - cap);
        if v < target {
            crossing = Some((ln_t / LN_2, v));
            break;
        }
    }
    Ok(AbundanceReport {
        n,
        start_log2_t: start / LN_2,
        ln_rhs_start: abundance_rhs_ln(n, start),
        crossing_log2_t: crossing.map(|c| c.0),
        ln_rhs_at_crossing: crossing.map(|c| c.1),
        t0_log2: t0_ln / LN_2,
        monotone_past_t0: monotone,
        u1_max_gap: gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistenceReport {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `t = n^{12 + 3 beta + 2 alpha}` and `delta = n^{-5 - beta - alpha}`, as logs.
    pub ln_t: f64,
    pub ln_delta: f64,
    pub gate_delta: bool,
    pub gate_cubic: bool,
    /// `log L(n, t, delta)`.
    pub ln_l: f64,
    /// `log` of `e^{-n^{-2 alpha}/4} + A(n, t)^{-1} e^{-(11/24) n^{2 + beta}}`.
    pub ln_rhs: f64,
    /// `ln_l - ln_rhs`; positive when the strict inequality holds.
    pub margin: f64,
    /// `L(n, t, delta) > e^{-n^{-2 alpha}/4}` on its own.
    pub first_term_holds: bool,
    pub verdict: Verdict,
}

pub fn existence_threshold(n: usize, alpha: f64, beta: f64) -> Result<ExistenceReport> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::BadAlphaBeta { alpha, beta });
    }
    if n < 2 {
        return Err(Error::InvalidParameters(format!("need n >= 2, got {n}")));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let d = pair_count(n) as f64;
    let ln_t = (12.0 + 3.0 * beta + 2.0 * alpha) * ln_n;
    let ln_delta = -(5.0 + beta + alpha) * ln_n;
    let ln_nd = ln_n + ln_delta;
    let gate_delta = ln_nd < 0.0;
    let gate_cubic = ln_t + 3.0 * ln_nd < 0.0;

    let t = ln_t.exp();
    let ln_l = -0.5 * (4.0 / 9.0 * (2.0 * ln_t + 6.0 * ln_nd).exp()).ln_1p()
        + t * (-(4.0 * ln_nd).exp() / 12.0).ln_1p()
        + 0.5 * d * ln_one_minus_exp_neg(0.5 * (ln_t + 2.0 * ln_delta).exp());
    let first = -0.25 * (-2.0 * alpha * ln_n).exp();
    let second = -ln_a(n, 1.0) + 0.5 * d * ln_t - (11.0 / 24.0) * ((2.0 + beta) * ln_n).exp();
    let ln_rhs = logsumexp(first, second);
    let margin = ln_l - ln_rhs;
    let evaluable = ln_l.is_finite() && ln_rhs.is_finite();
    let verdict = if !(gate_delta && gate_cubic) || !evaluable {
        Verdict::Inconclusive
    } else if margin > 0.0 {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(ExistenceReport {
        n,
        alpha,
        beta,
        ln_t,
        ln_delta,
        gate_delta,
        gate_cubic,
        ln_l,
        ln_rhs,
        margin,
        first_term_holds: ln_l > first,
        verdict,
    })
}
