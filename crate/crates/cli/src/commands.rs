use std::time::Instant;

use hadamard_walk::bounds::{
    abundance_threshold, delta_grid, exact_count, existence_threshold, table_csv, table_row,
    BoundsReport,
};
use hadamard_walk::exact::{count_closed_form_with, count_csv, CountRecord};
use hadamard_walk::integral::{
    integrate_box_mc, integrate_box_midpoint, inversion_exact_grid, residual_bound_check,
};
use hadamard_walk::unitset::{lambda2_even, lambda_cardinality, lambda_dump, psi_on_lambda_multiset, MAX_WALK_N};
use hadamard_walk::verify::{run_suite, Suite, VerifyConfig};
use hadamard_walk::walksim::{increment_moment_check, simulate_return_prob, SimConfig};
use hadamard_walk::{brute_force_count, count_exact_dp, Error, N2Reading, Parameters, TorusPoint};
use rayon::prelude::*;
use serde_json::json;

use crate::args::*;
use crate::config::parse_range;
use crate::output::Output;

pub enum Failure {
    Usage(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

pub struct Run {
    pub output: Output,
    /// Replaces the aligned table when the format is `table`.
    pub text: Option<String>,
    pub warnings: Vec<String>,
    /// True when a verification inside the command failed.
    pub failed: bool,
}

impl Run {
    fn new(output: Output) -> Self {
        Self {
            output,
            text: None,
            warnings: Vec::new(),
            failed: false,
        }
    }
}

type Res = Result<Run, Failure>;

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn range(v: &Option<String>, flag: &str) -> Result<Vec<usize>, Failure> {
    parse_range(need(v.as_deref(), flag)?).map_err(Failure::Usage)
}

fn ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn grid(ns: &[usize], ts: &[usize]) -> Vec<(usize, usize)> {
    ns.iter().flat_map(|&n| ts.iter().map(move |&t| (n, t))).collect()
}

pub fn count(a: &CountArgs, timing: bool) -> Res {
    let cells = grid(&range(&a.n, "n")?, &range(&a.t, "t")?);
    let method = a.method.unwrap_or(Method::Auto);
    let reading = match a.n2_reading.unwrap_or(Reading::Central) {
        Reading::Central => N2Reading::CentralBinomial,
        Reading::Pair => N2Reading::PairBinomial,
    };
    let records: Vec<Result<CountRecord, Error>> = cells
        .par_iter()
        .map(|&(n, t)| {
            let start = Instant::now();
            let p = Parameters::new(n, t)?;
            let c = match method {
                Method::Auto if n <= 3 && t > 0 && t % 4 == 0 => count_closed_form_with(&p, reading)?,
                Method::Auto | Method::Dp => count_exact_dp(&p)?,
                Method::Closed => count_closed_form_with(&p, reading)?,
                Method::Brute => brute_force_count(&p)?,
            };
            let mut r = c.to_record();
            r.wall_time_ms = timing.then(|| ms(start));
            Ok(r)
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
    let out = if records.len() == 1 {
        Output::one(&records[0])
    } else {
        Output::rows(&records)
    };
    Ok(Run::new(out.with_csv(count_csv(&records))))
}

pub fn verify(a: &VerifyArgs) -> Res {
    let suite: Suite = a.suite.as_deref().unwrap_or("all").parse()?;
    let cfg = VerifyConfig {
        n: a.n,
        t: a.t,
        samples: a.samples,
        seed: a.seed.unwrap_or(VerifyConfig::default().seed),
    };
    let reports = run_suite(suite, &cfg)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let (mut pass, mut total) = (0, 0);
    for r in &reports {
        for c in &r.checks {
            total += 1;
            pass += usize::from(c.pass);
            rows.push(json!({"suite": r.suite, "check": c.name, "pass": c.pass, "detail": c.detail}));
            text.push_str(&format!("{} {}/{}: {}\n", if c.pass { "PASS" } else { "FAIL" }, r.suite, c.name, c.detail));
        }
    }
    text.push_str(&format!("{pass} of {total} checks passed\n"));
    let mut run = Run::new(Output::rows(&rows));
    run.text = Some(text);
    run.failed = reports.iter().any(|r| !r.passed());
    Ok(run)
}

pub fn table(a: &TableArgs) -> Res {
    let cells = grid(&range(&a.n, "n")?, &range(&a.t, "t")?);
    let rows: Vec<_> = cells
        .par_iter()
        .map(|&(n, t)| table_row(n, t, !a.no_brute))
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let warnings = rows
        .iter()
        .filter(|r| r.status != "ok")
        .map(|r| format!("n={} t={}: {}", r.n, r.t, r.status))
        .collect();
    let mut run = Run::new(Output::rows(&rows).with_csv(table_csv(&rows)));
    run.warnings = warnings;
    Ok(run)
}

pub fn bounds(a: &BoundsArgs) -> Res {
    let n = need(a.n, "n")?;
    let t = need(a.t, "t")?;
    let p = Parameters::new(n, t)?;
    let exact = exact_count(&p).ok();
    let deltas = match a.delta {
        Some(d) => vec![d],
        None => delta_grid(n),
    };
    let reports = deltas
        .into_iter()
        .map(|d| BoundsReport::new(&p, t, d, exact.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut run = Run::new(Output::rows(&reports));
    run.failed = reports.iter().any(|r| r.holds() == Some(false));
    if exact.is_none() {
        run.warnings.push(format!("no exact count for n={n} t={t}; bounds not checked"));
    }
    Ok(run)
}

pub fn threshold(a: &ThresholdArgs) -> Res {
    let n = need(a.n, "n")?;
    let abundance = abundance_threshold(n)?;
    let mut row = json!({"abundance": abundance});
    match (a.alpha, a.beta) {
        (Some(alpha), Some(beta)) => {
            row["existence"] = serde_json::to_value(existence_threshold(n, alpha, beta)?).expect("json");
        }
        (None, None) => {}
        _ => return Err(Failure::Usage("--alpha and --beta go together".into())),
    }
    Ok(Run::new(Output::one(&row)))
}

pub fn integrate(a: &IntegrateArgs, timing: bool) -> Res {
    let n = need(a.n, "n")?;
    let t = need(a.t, "t")?;
    let p = Parameters::new(n, t)?;
    let seed = a.seed.unwrap_or(1);
    let samples = a.samples.unwrap_or(1_000_000);
    let start = Instant::now();
    match a.method.unwrap_or(IntegralKind::Grid) {
        IntegralKind::Residual => {
            let delta = need(a.delta, "delta")?;
            let r = residual_bound_check(&p, t, delta, samples, seed)?;
            let mut v = serde_json::to_value(&r).expect("json");
            if timing {
                v["elapsed_ms"] = json!(ms(start));
            }
            let mut run = Run::new(Output::one(&v));
            run.failed = !r.passed();
            Ok(run)
        }
        kind => {
            let zero = TorusPoint::zeros(p.d());
            let radius = a.delta.unwrap_or(0.1);
            let mut est = match kind {
                IntegralKind::Grid => inversion_exact_grid(&p, t)?,
                IntegralKind::Mc => integrate_box_mc(&p, t, &zero, radius, samples, seed)?,
                _ => integrate_box_midpoint(&p, t, &zero, radius, a.k.unwrap_or(8))?,
            };
            est.elapsed_ms = timing.then(|| ms(start));
            Ok(Run::new(Output::one(&est)))
        }
    }
}

pub fn simulate(a: &SimulateArgs, timing: bool) -> Res {
    let n = need(a.n, "n")?;
    let seed = a.seed.unwrap_or(1);
    let chains = a.chains.unwrap_or(1_000_000);
    let start = Instant::now();
    if a.moments {
        let r = increment_moment_check(n, chains, seed)?;
        let mut v = serde_json::to_value(&r).expect("json");
        if timing {
            v["elapsed_ms"] = json!(ms(start));
        }
        let mut run = Run::new(Output::one(&v));
        run.failed = !r.passed();
        return Ok(run);
    }
    let t = need(a.t, "t")?;
    let mut r = simulate_return_prob(&SimConfig::new(n, t, chains, seed)?)?;
    r.elapsed_ms = timing.then(|| ms(start));
    Ok(Run::new(Output::one(&r)))
}

pub fn lambda(a: &LambdaArgs) -> Res {
    let n = need(a.n, "n")?;
    let p = Parameters::new(n, 0)?;
    if a.summary {
        let mut row = json!({
            "n": n,
            "lambda_size": lambda_cardinality(n),
            "lambda2_even_size": lambda2_even(&p)?.len(),
        });
        if n <= MAX_WALK_N {
            row["psi_values"] = serde_json::to_value(psi_on_lambda_multiset(&p)?).expect("json");
        }
        return Ok(Run::new(Output::one(&row)));
    }
    let lines = lambda_dump(&p)?;
    let rows: Vec<_> = lines
        .iter()
        .map(|l| {
            let mut it = l.split(' ');
            json!({"point": it.next(), "class": it.next(), "psi": it.next()})
        })
        .collect();
    let mut run = Run::new(Output::rows(&rows));
    run.text = Some(lines.iter().map(|l| format!("{l}\n")).collect());
    Ok(run)
}
