//! Named verification suites shared by the command-line tool and the test
//! harness. Each suite returns one [`Check`] per claim it exercises.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::appendix::appendix_sweep;
use crate::bounds::{
    asymptotic_count_log2, branching_bound, branching_step, existence_threshold, exact_count,
    sandwich, Verdict,
};
use crate::charfn::{psi_magnitude_bound_min, psi_power_real_bounds, CharFn};
use crate::error::{Error, Result};
use crate::exact::{
    brute_force_count, count_closed_form, count_exact_dp, count_exact_dp_with, log2_big, ratio_f64,
    CountResult, DpConfig,
};
use crate::integral::{gaussian_box_integral, inversion_exact_grid, residual_bound_check};
use crate::lattice::{pair_count, Parameters, TorusPoint};
use crate::mc::batch_rng;
use crate::unitset::{
    compose_triangles, even_graphs, lambda2_even, lambda2_star, lambda_cardinality, lambda_iter,
    psi_on_lambda_multiset, scan_unit_points, triangle_decompose, PairGraph, QuarterPsi,
    MAX_SCAN_N, MAX_WALK_N,
};
use crate::walksim::{increment_moment_check, simulate_return_prob, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lambda,
    Charfn,
    Sandwich,
    Appendix,
    Exact,
    Integral,
    Walk,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Exact,
        Suite::Lambda,
        Suite::Charfn,
        Suite::Integral,
        Suite::Sandwich,
        Suite::Appendix,
        Suite::Walk,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lambda => "lambda",
            Suite::Charfn => "charfn",
            Suite::Sandwich => "sandwich",
            Suite::Appendix => "appendix",
            Suite::Exact => "exact",
            Suite::Integral => "integral",
            Suite::Walk => "walk",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::BadInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Overrides for a suite's default parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub samples: Option<u64>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: None,
            t: None,
            samples: None,
            seed: 1,
        }
    }
}

impl VerifyConfig {
    fn ns(&self, default: &[usize]) -> Vec<usize> {
        self.n.map_or_else(|| default.to_vec(), |n| vec![n])
    }

    fn ts(&self, default: &[usize]) -> Vec<usize> {
        self.t.map_or_else(|| default.to_vec(), |t| vec![t])
    }

    fn samples(&self, default: u64) -> u64 {
        self.samples.unwrap_or(default)
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    let one = |s: Suite| -> Result<SuiteReport> {
        let checks = match s {
            Suite::Exact => exact_suite(cfg)?,
            Suite::Lambda => lambda_suite(cfg)?,
            Suite::Charfn => charfn_suite(cfg)?,
            Suite::Integral => integral_suite(cfg)?,
            Suite::Sandwich => sandwich_suite(cfg)?,
            Suite::Appendix => appendix_suite(cfg),
            Suite::Walk => walk_suite(cfg)?,
            Suite::All => unreachable!(),
        };
        Ok(SuiteReport { suite: s, checks })
    };
    match suite {
        Suite::All => Suite::EACH.iter().map(|&s| one(s)).collect(),
        s => Ok(vec![one(s)?]),
    }
}

fn big_detail(a: &BigUint, b: &BigUint) -> String {
    if a == b {
        format!("{a}")
    } else {
        format!("{a} != {b}")
    }
}

/// `(n, t)` pairs with `n t <= 20`, the brute-force range.
pub fn brute_force_pairs() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for n in 2..=10 {
        for t in 1..=20 / n {
            v.push((n, t));
        }
    }
    v
}

/// The convolution with the row cap lifted to `n`; small `t` keeps it cheap.
pub fn dp_any_n(params: &Parameters) -> Result<CountResult> {
    let cfg = DpConfig {
        max_n: params.n.max(DpConfig::default().max_n),
        ..DpConfig::default()
    };
    count_exact_dp_with(params, &cfg)
}

/// Closed forms against the convolution, brute force against the
/// convolution, and the branching inequalities on every count produced.
pub fn exact_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut counts: Vec<CountResult> = Vec::new();
    for n in cfg.ns(&[2, 3]).into_iter().filter(|&n| n <= 3) {
        for t in cfg.ts(&[4, 8, 12, 16]).into_iter().filter(|t| t % 4 == 0) {
            let p = Parameters::new(n, t)?;
            let closed = count_closed_form(&p)?;
            let dp = count_exact_dp(&p)?;
            checks.push(Check::new(
                format!("closed_form n={n} t={t}"),
                closed.matrix_count == dp.matrix_count,
                big_detail(&dp.matrix_count, &closed.matrix_count),
            ));
            counts.push(dp);
        }
    }
    for (n, t) in brute_force_pairs() {
        if cfg.n.is_some_and(|x| x != n) || cfg.t.is_some_and(|x| x != t) {
            continue;
        }
        let p = Parameters::new(n, t)?;
        let brute = brute_force_count(&p)?;
        let dp = dp_any_n(&p)?;
        checks.push(Check::new(
            format!("brute_force n={n} t={t}"),
            brute.matrix_count == dp.matrix_count,
            big_detail(&dp.matrix_count, &brute.matrix_count),
        ));
        counts.push(dp);
    }
    checks.extend(branching_checks(&counts)?);
    Ok(checks)
}

/// Per-step inequality `P_n <= 2^{-(n-1)} P_{n-1}`, the count form
/// `N_{n,t} <= 2^{nt - C(n,2)}`, and the cap on order-`n` matrices.
pub fn branching_checks(counts: &[CountResult]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut steps = 0;
    let mut step_fail = Vec::new();
    let mut count_fail = Vec::new();
    for c in counts {
        let (n, t) = (c.n(), c.t());
        let prev = if n == 2 {
            BigRational::one()
        } else {
            dp_any_n(&Parameters::new(n - 1, t)?)?.return_prob
        };
        let s = branching_step(n, t, &c.return_prob, &prev);
        steps += 1;
        if !s.holds {
            step_fail.push(format!("({n},{t})"));
        }
        let within = match (n * t).checked_sub(pair_count(n)) {
            Some(e) => c.matrix_count <= BigUint::one() << e,
            None => c.matrix_count == BigUint::ZERO,
        };
        if !within {
            count_fail.push(format!("({n},{t})"));
        }
    }
    checks.push(Check::new(
        "branching_step",
        step_fail.is_empty(),
        if step_fail.is_empty() {
            format!("{steps} links hold")
        } else {
            format!("violated at {}", step_fail.join(" "))
        },
    ));
    checks.push(Check::new(
        "branching_count_form",
        count_fail.is_empty(),
        if count_fail.is_empty() {
            format!("N <= 2^(nt - C(n,2)) on {steps} counts")
        } else {
            format!("violated at {}", count_fail.join(" "))
        },
    ));
    let square: Vec<&CountResult> = counts.iter().filter(|c| c.n() == c.t()).collect();
    let cap_fail: Vec<String> = square
        .iter()
        .filter(|c| c.matrix_count > branching_bound(&c.params))
        .map(|c| format!("n={}", c.n()))
        .collect();
    checks.push(Check::new(
        "branching_cap",
        cap_fail.is_empty(),
        if cap_fail.is_empty() {
            let list: Vec<String> = square
                .iter()
                .map(|c| format!("N_{}={} <= {}", c.n(), c.matrix_count, branching_bound(&c.params)))
                .collect();
            list.join(", ")
        } else {
            format!("exceeded at {}", cap_fail.join(" "))
        },
    ));
    Ok(checks)
}

/// Which of the given counts satisfy `P_n <= 2^{n-1-t} P_{n-1}` as literally
/// written; informational only.
pub fn literal_branching_failures(counts: &[CountResult]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for c in counts {
        let (n, t) = (c.n(), c.t());
        let prev = if n == 2 {
            BigRational::one()
        } else {
            dp_any_n(&Parameters::new(n - 1, t)?)?.return_prob
        };
        if !branching_step(n, t, &c.return_prob, &prev).literal_holds {
            out.push((n, t));
        }
    }
    Ok(out)
}

/// Cardinalities, the multiset of `psi` values, `Lambda_2^even = Lambda_2^*`,
/// triangle decompositions, closure and (small `n`) the full `Lambda_0` scan.
pub fn lambda_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in cfg.ns(&[3, 4, 5, 6]) {
        let p = Parameters::new(n, 0)?;
        let d = pair_count(n);
        let expect = lambda_cardinality(n);
        if n <= MAX_WALK_N {
            let got = lambda_iter(&p)?.count() as u64;
            checks.push(Check::new(
                format!("lambda_size n={n}"),
                got == expect,
                format!("{got} (2^{})", 2 * d + 1 - n),
            ));
            let h = psi_on_lambda_multiset(&p)?;
            let each = 1u64 << (2 * d - n - 1);
            let ok = [h.plus_one, h.plus_i, h.minus_one, h.minus_i]
                .iter()
                .all(|&c| c == each)
                && h.not_unit == 0;
            checks.push(Check::new(
                format!("psi_multiset n={n}"),
                ok,
                format!(
                    "+1:{} +i:{} -1:{} -i:{} non-unit:{} (expect {each} each)",
                    h.plus_one, h.plus_i, h.minus_one, h.minus_i, h.not_unit
                ),
            ));
        }
        let even = lambda2_even(&p)?;
        let expect_even = 1u64 << pair_count(n - 1);
        checks.push(Check::new(
            format!("lambda2_even_size n={n}"),
            even.len() as u64 == expect_even,
            format!("{} (2^{})", even.len(), pair_count(n - 1)),
        ));
        if n <= MAX_WALK_N + 1 {
            let star = lambda2_star(&p)?;
            checks.push(Check::new(
                format!("lambda2_even_eq_star n={n}"),
                star == even,
                format!("{} unit points in Lambda_2", star.len()),
            ));
        }
        let mut bad = 0;
        for g in even_graphs(n)? {
            let graph = PairGraph::from_mask(n, g)?;
            let tri = triangle_decompose(&graph)?;
            if compose_triangles(n, &tri)? != graph {
                bad += 1;
            }
        }
        checks.push(Check::new(
            format!("triangle_decomposition n={n}"),
            bad == 0,
            format!("{} even graphs, {bad} mismatches", even.len()),
        ));
        checks.push(closure_check(n, cfg.seed)?);
        if n <= MAX_SCAN_N {
            let found = scan_unit_points(&p)?;
            let outside = found.iter().filter(|q| !q.in_constructed_lambda()).count();
            checks.push(Check::new(
                format!("lambda0_scan n={n}"),
                outside == 0 && found.len() as u64 == expect,
                format!("{} of 4^{d} points unit, {outside} outside the construction", found.len()),
            ));
        }
    }
    Ok(checks)
}

fn closure_check(n: usize, seed: u64) -> Result<Check> {
    let p = Parameters::new(n, 0)?;
    let q = QuarterPsi::new(n)?;
    let mut bad = 0u64;
    let mut tried = 0u64;
    if n <= 4 {
        let pts: Vec<_> = lambda_iter(&p)?.collect();
        for a in &pts {
            for b in &pts {
                tried += 1;
                let s = a.add(b);
                if !s.in_constructed_lambda() || q.eval(&s).unit_root().is_none() {
                    bad += 1;
                }
            }
        }
    } else {
        let d = pair_count(n);
        let evens: Vec<u64> = even_graphs(n)?.collect();
        let mut rng = batch_rng(seed, n as u64);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            let low = evens[rng.random_range(0..evens.len())];
            let high = rng.random::<u64>() & ((1u64 << d) - 1);
            crate::unitset::QuarterPhasePoint::from_planes(n, low, high)
        };
        for _ in 0..100_000 {
            let a = pick(&mut rng)?;
            let b = pick(&mut rng)?;
            tried += 1;
            let s = a.add(&b);
            if !s.in_constructed_lambda() || q.eval(&s).unit_root().is_none() {
                bad += 1;
            }
        }
    }
    Ok(Check::new(
        format!("lambda_closed_under_addition n={n}"),
        bad == 0,
        format!("{tried} sums, {bad} left the set"),
    ))
}

fn random_point<R: Rng>(rng: &mut R, d: usize, radius: f64) -> Result<TorusPoint> {
    TorusPoint::new((0..d).map(|_| rng.random_range(-radius..radius)).collect())
}

/// Local second-order estimates on small boxes, the magnitude bound over the
/// torus, and the factorized evaluation.
pub fn charfn_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let samples = cfg.samples(20_000);
    for n in cfg.ns(&[3, 4, 5]) {
        let p = Parameters::new(n, 0)?;
        let d = p.d();
        let cf = CharFn::new(n)?;
        let mut rng = batch_rng(cfg.seed, 1000 + n as u64);
        let delta = 0.9 / n as f64;
        let (mut re_bad, mut e1_bad, mut e2_bad) = (0, 0, 0);
        for _ in 0..samples {
            let r = delta * rng.random::<f64>();
            let lam = random_point(&mut rng, d, r)?;
            let rep = psi_power_real_bounds(&p, &lam, r.max(1e-12))?;
            re_bad += u32::from(!rep.re_floor_holds());
            e1_bad += u32::from(!rep.eps1_holds());
            e2_bad += u32::from(!rep.eps2_holds());
        }
        checks.push(Check::new(
            format!("local_estimates n={n}"),
            re_bad + e1_bad + e2_bad == 0,
            format!("{samples} points with n*delta < 0.9: re_floor {re_bad}, eps1 {e1_bad}, eps2 {e2_bad} violations"),
        ));
        let (mut mag_bad, mut fac_bad) = (0, 0);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..samples {
            let lam = random_point(&mut rng, d, std::f64::consts::PI)?;
            let psi = cf.eval(lam.as_slice());
            let bound = psi_magnitude_bound_min(&p, &lam)?;
            let excess = psi.norm_sqr() - bound;
            worst = worst.max(excess);
            mag_bad += u32::from(excess > crate::charfn::BOUND_SLACK);
            let k = rng.random_range(1..=n);
            fac_bad += u32::from((cf.eval_factorized(lam.as_slice(), k) - psi).norm() > 1e-12);
        }
        checks.push(Check::new(
            format!("magnitude_bound n={n}"),
            mag_bad == 0,
            format!("{samples} torus points, max |psi|^2 - bound = {worst:.3e}"),
        ));
        checks.push(Check::new(
            format!("factorized_eval n={n}"),
            fac_bad == 0,
            format!("{fac_bad} of {samples} disagree beyond 1e-12"),
        ));
    }
    Ok(checks)
}

/// `(n, t)` pairs where the grid inversion is compared with exact counts.
pub fn inversion_pairs() -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (2..=3)
        .flat_map(|n| (1..=12).map(move |t| (n, t)))
        .collect();
    v.push((4, 8));
    v
}

/// Grid inversion against exact probabilities, the residual-region bound,
/// and the Gaussian box envelope.
pub fn integral_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let mut done = 0;
    for (n, t) in inversion_pairs() {
        if cfg.n.is_some_and(|x| x != n) || cfg.t.is_some_and(|x| x != t) {
            continue;
        }
        let p = Parameters::new(n, t)?;
        let est = inversion_exact_grid(&p, t)?;
        let exact = ratio_f64(&count_exact_dp(&p)?.return_prob);
        let err = if exact == 0.0 {
            est.value.abs()
        } else {
            (est.value - exact).abs() / exact
        };
        worst = worst.max(err);
        done += 1;
        if err > 1e-10 {
            bad.push(format!("({n},{t})"));
        }
    }
    if done > 0 {
        checks.push(Check::new(
            "inversion_grid",
            bad.is_empty(),
            format!("{done} cases, worst relative error {worst:.2e} {}", bad.join(" ")),
        ));
    }
    let samples = cfg.samples(1_000_000);
    for (n, t, delta) in [(3, 8, 0.6), (4, 16, 0.4)] {
        if cfg.n.is_some_and(|x| x != n) || cfg.t.is_some_and(|x| x != t) {
            continue;
        }
        let r = residual_bound_check(&Parameters::new(n, 0)?, t, delta, samples, cfg.seed)?;
        checks.push(Check::new(
            format!("residual_bound n={n} t={t} delta={delta}"),
            r.passed(),
            format!(
                "|I_R| = {:.3e} +- {:.1e} vs bound {:.3e}; pointwise {}/{} violations",
                r.magnitude, r.std_error, r.bound, r.pointwise_violations, r.pointwise_checked
            ),
        ));
    }
    for (d, t, delta) in [(3, 8, 0.3), (6, 16, 0.2), (10, 40, 0.1)] {
        let g = gaussian_box_integral(d, t, delta)?;
        checks.push(Check::new(
            format!("gaussian_box d={d} t={t} delta={delta}"),
            g.strictly_inside(),
            format!("{:.6e} < {:.6e} < {:.6e}", g.lower, g.value, g.upper),
        ));
    }
    Ok(checks)
}

/// The sandwich against exact probabilities, the asymptotic trend for
/// `n = 3`, and consistency of the existence report.
pub fn sandwich_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in cfg.ns(&[3, 4]) {
        for t in cfg.ts(&[8, 16]) {
            let r = sandwich(&Parameters::new(n, 0)?, t)?;
            let tight = r.tightest();
            checks.push(Check::new(
                format!("sandwich n={n} t={t}"),
                r.all_hold,
                format!(
                    "{} deltas; P = {:.6e}, tightest A*U + res = {:.6e} at delta {:.4}",
                    r.points.len(),
                    r.exact_prob,
                    tight.a * tight.u + tight.residual,
                    tight.delta
                ),
            ));
        }
    }
    if cfg.n.is_none() || cfg.n == Some(3) {
        let (ok, detail) = asymptotic_trend()?;
        checks.push(Check::new("asymptotic_trend n=3", ok, detail));
    }
    let (ok, detail) = existence_consistency()?;
    checks.push(Check::new("existence_report_consistency", ok, detail));
    Ok(checks)
}

/// `exact / asymptotic` for `n = 3` over `t in {16, 40, 80, 160}`.
pub fn asymptotic_ratios() -> Result<Vec<(usize, f64)>> {
    [16, 40, 80, 160]
        .into_iter()
        .map(|t| {
            let p = Parameters::new(3, t)?;
            let exact = log2_big(&count_closed_form(&p)?.matrix_count);
            Ok((t, (exact - asymptotic_count_log2(&p, t)?).exp2()))
        })
        .collect()
}

pub fn asymptotic_trend() -> Result<(bool, String)> {
    let r = asymptotic_ratios()?;
    let at40 = r[1].1;
    let gaps: Vec<f64> = r.iter().map(|(_, x)| (x - 1.0).abs()).collect();
    let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
    let ok = (0.9..=1.1).contains(&at40) && shrinking;
    let list: Vec<String> = r.iter().map(|(t, x)| format!("t={t}: {x:.6}")).collect();
    Ok((ok, list.join(", ")))
}

/// Gates imply a finite verdict, and the verdict agrees with the margin.
pub fn existence_consistency() -> Result<(bool, String)> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in [3usize, 5, 10, 20, 50, 100, 200, 500, 1000] {
        for (alpha, beta) in [(0.1, 0.1), (0.5, 0.25), (1.0, 1.0), (2.0, 0.5)] {
            let r = existence_threshold(n, alpha, beta)?;
            checked += 1;
            let gates = r.gate_delta && r.gate_cubic;
            let consistent = match r.verdict {
                Verdict::Inconclusive => !gates || !r.margin.is_finite(),
                Verdict::Holds => gates && r.margin.is_finite() && r.margin > 0.0,
                Verdict::Fails => gates && r.margin.is_finite() && r.margin <= 0.0,
            };
            let evaluable = !gates || (r.ln_l.is_finite() && r.ln_rhs.is_finite());
            if !(consistent && evaluable) {
                bad.push(format!("(n={n}, a={alpha}, b={beta})"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} reports for n up to 1000")
        } else {
            format!("inconsistent at {}", bad.join(" "))
        },
    ))
}

pub fn appendix_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let r = appendix_sweep(cfg.samples(100_000), cfg.seed);
    vec![Check::new("appendix_inequalities", r.passed(), r.to_string())]
}

/// `(n, t)` pairs used to compare simulation with exact probabilities.
pub const WALK_PAIRS: [(usize, usize); 3] = [(3, 4), (3, 8), (4, 8)];

/// Simulated return frequencies against exact probabilities, and the first
/// three moments of a single increment.
pub fn walk_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let chains = cfg.samples(1_000_000);
    for (n, t) in WALK_PAIRS {
        if cfg.n.is_some_and(|x| x != n) || cfg.t.is_some_and(|x| x != t) {
            continue;
        }
        let sim = simulate_return_prob(&SimConfig::new(n, t, chains, cfg.seed)?)?;
        let exact = ratio_f64(&exact_count(&Parameters::new(n, t)?)?.return_prob);
        let sigma = (exact * (1.0 - exact) / chains as f64).sqrt();
        let z = (sim.estimate - exact) / sigma;
        checks.push(Check::new(
            format!("simulation n={n} t={t}"),
            z.abs() <= 4.0,
            format!("{} hits / {chains}: {:.6} vs exact {exact:.6} ({z:+.2} sigma)", sim.hits, sim.estimate),
        ));
    }
    for n in cfg.ns(&[3, 4, 5]) {
        let r = increment_moment_check(n, cfg.samples(1_000_000).min(1_000_000), cfg.seed)?;
        let parts: Vec<String> = r
            .moments
            .iter()
            .map(|m| format!("m{}={:.4}/{:.4}", m.order, m.sample_mean, m.expected))
            .collect();
        let exact_ok = r.moments.iter().all(|m| (m.enumerated - m.expected).abs() < 1e-12);
        checks.push(Check::new(
            format!("increment_moments n={n}"),
            r.passed() && exact_ok,
            parts.join(" "),
        ));
    }
    Ok(checks)
}
