//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. A failing criterion is rerun once with
//! the retry seed; a second failure is final.

use std::error::Error;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dstrings::cmpp::{MixingLaw, MixtureSpec};
use dstrings::exact::{cylinder_prob_integral, cylinder_prob_product, mixture_pmf, CylinderPattern};
use dstrings::experiment::{
    emit_report, retry_seed, run, run_once, ExperimentConfig, ExperimentName, ExperimentReport, OutputFormat,
    TestRecord,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_261_017;

type Checks = Result<Vec<Check>, Box<dyn Error>>;

struct Check {
    what: String,
    ok: bool,
}

fn check(what: impl Into<String>, ok: bool) -> Check {
    Check { what: what.into(), ok }
}

fn record<'a>(report: &'a ExperimentReport, name: &str) -> Result<&'a TestRecord, Box<dyn Error>> {
    report
        .tests
        .iter()
        .find(|t| t.test == name)
        .ok_or_else(|| format!("{} has no test {name}", report.experiment).into())
}

/// Pass/fail of the named records, labelled with their statistic or p-value.
fn records(report: &ExperimentReport, names: &[&str]) -> Checks {
    names
        .iter()
        .map(|&name| {
            let t = record(report, name)?;
            let detail = [("empirical", t.empirical), ("statistic", t.statistic), ("p", t.p_value)]
                .iter()
                .filter_map(|(k, v)| v.map(|v| format!("{k}={v:.4e}")))
                .collect::<Vec<_>>()
                .join(" ");
            Ok(check(format!("{} {name} {detail}", report.experiment), t.passed()))
        })
        .collect()
}

fn timed(what: &str, start: Instant, limit: Duration) -> Check {
    let took = start.elapsed();
    check(format!("{what} took {:.1}s", took.as_secs_f64()), took < limit)
}

fn config(name: ExperimentName, a: f64, b: f64, replicates: u64) -> ExperimentConfig {
    ExperimentConfig::new(name).with_params(a, b).with_replicates(replicates)
}

fn enumeration_oracle(seed: u64) -> Checks {
    let start = Instant::now();
    let cfg = config(ExperimentName::EnumerationOracle, 2.0, 1.0, 1_000_000).with_n(12).with_dmax(4);
    let report = run_once(&cfg, seed)?;
    let mut out = records(&report, &["tv_z1"])?;
    out.push(timed("enumeration oracle", start, Duration::from_secs(120)));
    Ok(out)
}

fn cmpp_equivalence(seed: u64) -> Checks {
    let cfg = config(ExperimentName::CmppEquivalence, 1.0, 2.0, 1_000_000).with_n(6);
    let mut out = records(&run_once(&cfg, seed)?, &["cylinders_bern"])?;
    for (a, b) in [(1.0, 1.0), (2.0, 3.0)] {
        let cfg = config(ExperimentName::CmppEquivalence, a, b, 100_000);
        let report = run_once(&cfg, seed)?;
        for c in records(&report, &["z1_marks_vs_mixture", "z2_marks_vs_mixture"])? {
            out.push(check(format!("({a},{b}) {}", c.what), c.ok));
        }
    }
    Ok(out)
}

fn mixture_values(seed: u64) -> Checks {
    let mix = MixtureSpec::new(1.0, MixingLaw::Beta { alpha: 1.0, beta: 1.0 })?;
    let p0 = mixture_pmf(&mix, 1, 0)?;
    let oracle = -(-1.0f64).exp_m1();
    let mut out = vec![check(
        format!("P(Z_1 = 0) under uniform mixing off by {:.1e}", (p0 - oracle).abs()),
        (p0 - oracle).abs() < 1e-9,
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let a: f64 = rng.random_range(0.2..5.0);
        let b: f64 = rng.random_range(0.2..5.0);
        let len = rng.random_range(1..=8);
        let gaps: Vec<u64> = (0..len).map(|_| rng.random_range(1..=6)).collect();
        let pattern = CylinderPattern::new(gaps)?;
        let product = cylinder_prob_product(a, b, &pattern)?;
        let integral = cylinder_prob_integral(a, b, &pattern)?;
        worst = worst.max(((product - integral) / product).abs());
    }
    out.push(check(
        format!("product vs integral cylinder worst relative error {worst:.1e} over 200 patterns"),
        worst < 1e-10,
    ));
    Ok(out)
}

fn feller(seed: u64) -> Checks {
    let cfg = config(ExperimentName::FellerCycles, 1.0, 0.0, 100_000).with_n(200);
    let report = run_once(&cfg, seed)?;
    let mut out = records(&report, &["c1_mean", "c2_mean", "c3_mean", "c4_mean", "c5_mean"])?;
    let cfg = config(ExperimentName::FellerUniformity, 1.0, 0.0, 1_000_000).with_n(4);
    out.extend(records(&run_once(&cfg, seed)?, &["uniformity"])?);
    Ok(out)
}

fn overdispersion(seed: u64) -> Checks {
    let start = Instant::now();
    let mut out = Vec::new();
    for b in [0.5, 2.0] {
        let cfg = config(ExperimentName::Bern1Counts, 1.0, b, 1_000_000);
        let report = run_once(&cfg, seed)?;
        for c in records(&report, &["z1_overdispersion", "z1_overdispersion_sign"])? {
            out.push(check(format!("b={b} {}", c.what), c.ok));
        }
    }
    out.push(timed("both overdispersion runs", start, Duration::from_secs(300)));
    Ok(out)
}

fn recurrence(seed: u64) -> Checks {
    let cfg = config(ExperimentName::Bern1Recurrence, 1.0, 0.5, 100_000);
    records(&run_once(&cfg, seed)?, &["z1_recurrence_vs_direct"])
}

fn dependence(seed: u64) -> Checks {
    let cfg = config(ExperimentName::SwappedDependence, 1.0, 0.0, 1_000_000);
    let mut out = records(&run_once(&cfg, seed)?, &["y2", "y3", "y2_and_y3"])?;
    let cfg = config(ExperimentName::PlusDependence, 1.0, 1.0, 1_000_000);
    out.extend(records(
        &run_once(&cfg, seed)?,
        &["y1", "y2", "y1_and_y2", "z1_r_independence", "z2_r_independence"],
    )?);
    Ok(out)
}

fn without_clock(report: &ExperimentReport) -> Result<Vec<u8>, Box<dyn Error>> {
    let mut value: serde_json::Value = serde_json::from_slice(&emit_report(report, OutputFormat::Json)?)?;
    value
        .as_object_mut()
        .ok_or("report is not a JSON object")?
        .remove("wall_clock_seconds");
    Ok(serde_json::to_vec_pretty(&value)?)
}

fn determinism(seed: u64) -> Checks {
    ExperimentName::ALL
        .iter()
        .map(|&name| {
            let cfg = config(name, 1.0, 2.0, 2_000).with_seed(seed);
            let first = without_clock(&run(&cfg)?)?;
            let second = without_clock(&run(&cfg)?)?;
            Ok(check(format!("{name} JSON identical across runs"), first == second))
        })
        .collect()
}

fn attempt(body: fn(u64) -> Checks, seed: u64) -> Vec<Check> {
    body(seed).unwrap_or_else(|e| vec![check(format!("error: {e}"), false)])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(u64) -> Checks); 8] = [
        ("enumeration oracle agrees with simulated Z_1", enumeration_oracle),
        ("marked Poisson construction reproduces Bern", cmpp_equivalence),
        ("mixture law values", mixture_values),
        ("Feller cycle counts and uniformity", feller),
        ("Bern1 overdispersion sign and size", overdispersion),
        ("recurrence sampler matches direct simulation", recurrence),
        ("dependence constants and r-independence", dependence),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, body)) in criteria.into_iter().enumerate() {
        let mut checks = attempt(body, SEED);
        let mut reseeded = false;
        if checks.iter().any(|c| !c.ok) {
            reseeded = true;
            checks = attempt(body, retry_seed(SEED));
        }
        let ok = checks.iter().all(|c| c.ok);
        failures += usize::from(!ok);
        println!(
            "{} criterion {}: {name}{}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            if reseeded { " (reseeded)" } else { "" }
        );
        for c in &checks {
            println!("    [{}] {}", if c.ok { "ok" } else { "failed" }, c.what);
        }
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
