use std::collections::BTreeMap;

use super::config::{ExperimentConfig, ExperimentName, BERN1_BIAS_TARGET, BERN_BIAS_TARGET};
use super::report::{Reference, Summary, TestRecord};
use super::{replicate, Outcome};
use crate::cmpp::{
    assemble_bits, counts_from_marks, epsilon_for_tolerance, realize, realize_prefix, sample_bern1_counts_recurrence,
    sample_mixture_counts, CmppSpec, MixingLaw, MixtureSpec,
};
use crate::error::Result;
use crate::exact::{
    bit_pattern_prob, enumerate_truncated, horizon_for_bias, mixture_moments, mixture_pmf, plus_model_probs,
    second_success_ln_survival, second_success_pmf, swapped_model_probs, truncation_bias_bound, z1_moments,
};
use crate::sequences::{
    count_ones, count_strings, feller_draw, gen_bern, indicators_to_counts, lehmer_rank, BernModel, BernSequence,
    CountVector,
};
use crate::stats::{
    chi2_categorical, chi2_gof, dispersion_test, empirical_distribution, moment_test, proportion_test,
    tv_distance, two_sample_counts, Verdict,
};

/// Orders reported by the count experiments.
const REPORTED_ORDERS: usize = 5;

pub(super) fn dispatch(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    match cfg.experiment {
        ExperimentName::BernCounts => bern_counts(cfg, seed),
        ExperimentName::Bern1Counts => bern1_counts(cfg, seed),
        ExperimentName::Bern1Recurrence => bern1_recurrence(cfg, seed),
        ExperimentName::CmppEquivalence => cmpp_equivalence(cfg, seed),
        ExperimentName::PlusDependence => plus_dependence(cfg, seed),
        ExperimentName::SwappedDependence => swapped_dependence(cfg, seed),
        ExperimentName::FellerCycles => feller_cycles(cfg, seed),
        ExperimentName::FellerUniformity => feller_uniformity(cfg, seed),
        ExperimentName::EnumerationOracle => enumeration_oracle(cfg, seed),
        ExperimentName::MixtureTables => mixture_tables(cfg, seed),
    }
}

fn first_orders(z: &CountVector) -> [u64; REPORTED_ORDERS] {
    std::array::from_fn(|i| z.get(i + 1))
}

fn column<const K: usize>(rows: &[[u64; K]], k: usize) -> Vec<u64> {
    rows.iter().map(|r| r[k]).collect()
}

fn as_f64(xs: &[u64]) -> Vec<f64> {
    xs.iter().map(|&x| x as f64).collect()
}

fn mixture_provenance(mix: &MixtureSpec) -> String {
    match mix.mixing {
        MixingLaw::PointMass(x) if x == 0.0 => "Z_k ~ Po(a/k): mean and variance a/k".to_string(),
        MixingLaw::PointMass(x) => format!("Z_k ~ Po(a(1 - x0^k)/k) at x0 = {x}"),
        MixingLaw::Beta { alpha, beta } => format!(
            "given X0 ~ Beta({alpha}, {beta}), Z_k ~ Po(a(1 - X0^k)/k); mean a(1 - E X0^k)/k, \
             variance mean + a^2 Var(X0^k)/k^2 from Beta raw moments"
        ),
    }
}

fn horizon(cfg: &ExperimentConfig, model: BernModel, target: f64, out: &mut Outcome) -> Result<u64> {
    let n = match cfg.n {
        Some(n) => n,
        None => horizon_for_bias(model, cfg.a, cfg.b, cfg.dmax, target)?,
    };
    let bias = truncation_bias_bound(model, cfg.a, cfg.b, cfg.dmax, n)?;
    out.references.push(Reference::new(
        "horizon",
        n as f64,
        format!("prefix length; automatic choice is the smallest N with bias bound <= {target}"),
    ));
    out.references.push(Reference::new(
        "truncation_bias_bound",
        bias,
        "expected strings of order <= dmax missed by the window: \
         sum_d (a^2/d) sum_{n=N-d+1}^{N} P(Y_n = 1)/a",
    ));
    Ok(n)
}

/// Windowed counts of `Bern(a, b)` against the mixture moments and pmf.
fn bern_counts(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let seq = BernSequence::bern(cfg.a, cfg.b)?;
    let mix = MixtureSpec::bern(cfg.a, cfg.b)?;
    let n = horizon(cfg, BernModel::Bern, BERN_BIAS_TARGET, &mut out)?;
    let rows = replicate(seed, 0, cfg.replicates, |rng| {
        Ok(first_orders(&count_ones(&seq.sample_ones(n, rng), cfg.dmax)?))
    })?;
    let kmax = cfg.dmax.min(REPORTED_ORDERS);
    for k in 1..=kmax {
        let (mean, var) = mixture_moments(&mix, k as u64)?;
        out.references.push(Reference::new(format!("mean_z{k}"), mean, mixture_provenance(&mix)));
        out.references.push(Reference::new(format!("var_z{k}"), var, mixture_provenance(&mix)));
        let xs = column(&rows, k - 1);
        let t = moment_test(&as_f64(&xs), mean, var, cfg.z_max)?;
        out.summaries.push(Summary::new(format!("mean_z{k}"), t.empirical_mean));
        out.summaries.push(Summary::new(format!("var_z{k}"), t.empirical_var));
        out.tests.extend(TestRecord::from_moments(&format!("z{k}"), &t));
        if k <= 2 {
            let g = chi2_gof(&xs, |j| mixture_pmf(&mix, k as u64, j).unwrap_or(f64::NAN), cfg.alpha)?;
            out.tests.push(TestRecord::from_gof(format!("z{k}_pmf"), &g));
        }
    }
    Ok(out)
}

fn z1_references(cfg: &ExperimentConfig, out: &mut Outcome) -> crate::exact::Z1Moments<f64> {
    let m = z1_moments(&cfg.a, &cfg.b);
    out.references.push(Reference::new("mean_z1", m.mean, "E Z_1 = a(a + 1)/(a + b)"));
    out.references.push(Reference::new(
        "var_z1",
        m.variance,
        "E Z_1^2 - (E Z_1)^2 with E Z_1^2 = a(a + 1)/(a + b) + a^2(a + 1)(a + 2)/((a + b)(a + b + 1))",
    ));
    out.references.push(Reference::new(
        "overdispersion_z1",
        m.overdispersion,
        "Var Z_1 - E Z_1 = a^2(a + 1)(b - 1)/((a + b)^2(a + b + 1)); negative for b < 1",
    ));
    m
}

/// `Z_1` of `Bern1(a, b)`: moments, overdispersion and its sign.
fn bern1_counts(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let seq = BernSequence::bern1(cfg.a, cfg.b)?;
    let n = horizon(cfg, BernModel::Bern1, BERN1_BIAS_TARGET, &mut out)?;
    let m = z1_references(cfg, &mut out);
    let xs = as_f64(&replicate(seed, 0, cfg.replicates, |rng| {
        Ok(count_ones(&seq.sample_ones(n, rng), 1)?.get(1))
    })?);
    let t = moment_test(&xs, m.mean, m.variance, cfg.z_max)?;
    out.summaries.push(Summary::new("mean_z1", t.empirical_mean));
    out.summaries.push(Summary::new("var_z1", t.empirical_var));
    out.tests.extend(TestRecord::from_moments("z1", &t));
    let od = dispersion_test(&xs, m.overdispersion, cfg.z_max)?;
    out.summaries.push(Summary::new("overdispersion_z1", od.estimate));
    out.tests.push(TestRecord::from_z("z1_overdispersion", &od));
    if m.overdispersion != 0.0 {
        // negative overdispersion must be resolved at |z| >= z_max; positive
        // overdispersion only needs the right sign
        let zero = dispersion_test(&xs, 0.0, cfg.z_max)?;
        let pass = if m.overdispersion < 0.0 {
            zero.z <= -cfg.z_max
        } else {
            zero.estimate > 0.0
        };
        out.tests.push(TestRecord::new(
            "z1_overdispersion_sign",
            Some(m.overdispersion),
            Some(zero.estimate),
            Some(zero.z),
            None,
            Verdict::from_pass(pass),
        ));
    }
    Ok(out)
}

/// Decomposition on the position of the second one against direct simulation.
fn bern1_recurrence(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let seq = BernSequence::bern1(cfg.a, cfg.b)?;
    let n = horizon(cfg, BernModel::Bern1, BERN1_BIAS_TARGET, &mut out)?;
    let m = z1_references(cfg, &mut out);
    out.references.push(Reference::new(
        "p_2",
        second_success_pmf(&cfg.a, &cfg.b, 2)?,
        "probability that the second one of Bern1(a, b) is at position 2: a/(a + b)",
    ));
    out.references.push(Reference::new(
        "p_mass_to_1e6",
        -second_success_ln_survival(cfg.a, cfg.b, 1_000_000).exp_m1(),
        "sum_{n=2}^{10^6} p_n = 1 - prod_{r=0}^{10^6-2} (b + r)/(a + b + r)",
    ));
    let dmax = cfg.dmax.max(2);
    let rec = replicate(seed, 0, cfg.replicates, |rng| {
        let z = sample_bern1_counts_recurrence(cfg.a, cfg.b, dmax, rng)?;
        Ok([z.get(1), z.get(2)])
    })?;
    let direct = replicate(seed, 1, cfg.replicates, |rng| {
        let z = count_ones(&seq.sample_ones(n, rng), 2)?;
        Ok([z.get(1), z.get(2)])
    })?;
    for k in 0..2 {
        let g = two_sample_counts(&column(&rec, k), &column(&direct, k), cfg.alpha)?;
        out.tests.push(TestRecord::from_gof(format!("z{}_recurrence_vs_direct", k + 1), &g));
    }
    let t = moment_test(&as_f64(&column(&rec, 0)), m.mean, m.variance, cfg.z_max)?;
    out.summaries.push(Summary::new("mean_z1_recurrence", t.empirical_mean));
    out.tests.extend(TestRecord::from_moments("z1_recurrence", &t));
    Ok(out)
}

fn pattern_index(bits: &[u8]) -> usize {
    bits.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum()
}

fn pattern_bits(idx: usize, len: usize) -> Vec<u8> {
    (0..len).map(|i| ((idx >> i) & 1) as u8).collect()
}

/// Cylinder frequencies of assembled prefixes against product probabilities.
fn cylinder_test(
    cfg: &ExperimentConfig,
    seed: u64,
    task: u64,
    spec: &CmppSpec,
    model: BernModel,
    len: usize,
) -> Result<TestRecord> {
    let idx = replicate(seed, task, cfg.replicates, |rng| {
        let real = realize_prefix(spec, len as u64, rng)?;
        Ok(pattern_index(assemble_bits(&real, len)?.bits()))
    })?;
    let cats = 1usize << len;
    let mut observed = vec![0u64; cats];
    for i in idx {
        observed[i] += 1;
    }
    let probs: Vec<f64> = (0..cats)
        .map(|i| bit_pattern_prob(model, &cfg.a, &cfg.b, &pattern_bits(i, len)))
        .collect();
    let labels: Vec<String> = (0..cats)
        .map(|i| pattern_bits(i, len).iter().map(|b| char::from(b'0' + b)).collect())
        .collect();
    let g = chi2_categorical(&observed, &probs, &labels, cfg.alpha)?;
    let name = match model {
        BernModel::Bern => "cylinders_bern",
        BernModel::Bern1 => "cylinders_bern1",
    };
    Ok(TestRecord::from_gof(name, &g))
}

/// Two-sample tests of `Z_1` and `Z_2` between two count samplers.
fn count_pair_tests(
    name: &str,
    cfg: &ExperimentConfig,
    left: &[[u64; REPORTED_ORDERS]],
    right: &[[u64; REPORTED_ORDERS]],
    out: &mut Outcome,
) -> Result<()> {
    for k in 0..2.min(cfg.dmax) {
        let g = two_sample_counts(&column(left, k), &column(right, k), cfg.alpha)?;
        out.tests.push(TestRecord::from_gof(format!("z{}_{name}", k + 1), &g));
    }
    Ok(())
}

fn mark_counts(
    cfg: &ExperimentConfig,
    seed: u64,
    task: u64,
    spec: &CmppSpec,
) -> Result<Vec<[u64; REPORTED_ORDERS]>> {
    let eps = epsilon_for_tolerance(cfg.a, cfg.dmax, cfg.mark_loss_tolerance)?;
    replicate(seed, task, cfg.replicates, |rng| {
        Ok(first_orders(&counts_from_marks(&realize(spec, eps, rng)?, cfg.dmax)?))
    })
}

/// The marked Poisson construction reproduces `Bern(a, b)` (and `Bern1(a, b)`
/// for `b >= 1`), and its mark counts follow the Poisson mixture.
fn cmpp_equivalence(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let len = cfg.n.unwrap_or(6) as usize;
    let spec = CmppSpec::beta_bern(cfg.a, cfg.b)?;
    out.references.push(Reference::new(
        "prefix_length",
        len as f64,
        "cylinder probabilities are products of marginals a/(a + b + n - 1)",
    ));
    out.tests.push(cylinder_test(cfg, seed, 0, &spec, BernModel::Bern, len)?);
    if cfg.b >= 1.0 {
        let spec1 = CmppSpec::beta_bern1(cfg.a, cfg.b)?;
        out.tests.push(cylinder_test(cfg, seed, 1, &spec1, BernModel::Bern1, len)?);
    }
    let eps = epsilon_for_tolerance(cfg.a, cfg.dmax, cfg.mark_loss_tolerance)?;
    out.references.push(Reference::new(
        "epsilon",
        eps,
        "truncation 1 - epsilon with epsilon = tol/(a dmax) bounds the expected lost marks by tol",
    ));
    let via_marks = mark_counts(cfg, seed, 2, &spec)?;
    let mix = MixtureSpec::bern(cfg.a, cfg.b)?;
    let mixture = replicate(seed, 3, cfg.replicates, |rng| {
        Ok(first_orders(&sample_mixture_counts(&mix, cfg.dmax, rng)?))
    })?;
    count_pair_tests("marks_vs_mixture", cfg, &via_marks, &mixture, &mut out)?;
    Ok(out)
}

/// Proportion test recorded under `name`.
fn proportion(name: &str, hits: u64, cfg: &ExperimentConfig, p: f64, out: &mut Outcome) -> Result<f64> {
    let t = proportion_test(hits, cfg.replicates, p, cfg.z_max)?;
    out.summaries.push(Summary::new(name, t.estimate));
    out.tests.push(TestRecord::from_z(name, &t));
    Ok(t.estimate)
}

/// Pass iff the joint frequency is resolved away from the product of the
/// marginals at `|z| >= z_max`.
fn dependence_record(joint_hat: f64, joint: f64, product: f64, cfg: &ExperimentConfig) -> TestRecord {
    let se = (joint * (1.0 - joint) / cfg.replicates as f64).sqrt();
    let z = (joint_hat - product) / se;
    TestRecord::new(
        "independence_rejected",
        Some(product),
        Some(joint_hat),
        Some(z),
        None,
        Verdict::from_pass(z.abs() >= cfg.z_max),
    )
}

/// First two bits under the `r+` initial mark, and r-independence of counts.
fn plus_dependence(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let spec = CmppSpec::plus(cfg.a, cfg.b)?;
    let p = plus_model_probs(&cfg.a, &cfg.b)?;
    out.references.push(Reference::new("y1", p.y1, "P+(Y_1 = 1) = a(a + 1)/((a + b)(a + b + 1))"));
    out.references.push(Reference::new(
        "y2",
        p.y2,
        "P+(Y_2 = 1) = (a^2(a + 2) + 2ab(a + 1))/((a + b)(a + b + 1)(a + b + 2))",
    ));
    out.references.push(Reference::new(
        "y1_and_y2",
        p.joint,
        "P+(Y_1 = 1, Y_2 = 1) = a^2(a + 2)/((a + b)(a + b + 1)(a + b + 2))",
    ));
    out.references.push(Reference::new("product", p.product, "P+(Y_1 = 1) P+(Y_2 = 1)"));
    let pairs = replicate(seed, 0, cfg.replicates, |rng| {
        let bits = assemble_bits(&realize_prefix(&spec, 2, rng)?, 2)?;
        Ok((bits.bits()[0], bits.bits()[1]))
    })?;
    let y1 = pairs.iter().filter(|p| p.0 == 1).count() as u64;
    let y2 = pairs.iter().filter(|p| p.1 == 1).count() as u64;
    let both = pairs.iter().filter(|p| p.0 == 1 && p.1 == 1).count() as u64;
    proportion("y1", y1, cfg, p.y1, &mut out)?;
    proportion("y2", y2, cfg, p.y2, &mut out)?;
    let joint_hat = proportion("y1_and_y2", both, cfg, p.joint, &mut out)?;
    out.tests.push(dependence_record(joint_hat, p.joint, p.product, cfg));
    let plus = mark_counts(cfg, seed, 1, &spec)?;
    let base = mark_counts(cfg, seed, 2, &CmppSpec::beta_bern(cfg.a, cfg.b)?)?;
    count_pair_tests("r_independence", cfg, &plus, &base, &mut out)?;
    Ok(out)
}

/// Bits 2 and 3 after exchanging the first two marked points of the
/// `Bern(1, 0)` construction. The parameters `a` and `b` are not used.
fn swapped_dependence(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let spec = CmppSpec::swapped();
    let p = swapped_model_probs::<f64>();
    out.references.push(Reference::new("y2", p.y2, "P'(Y_2 = 1) = 1/4"));
    out.references.push(Reference::new("y3", p.y3, "P'(Y_3 = 1) = 1/6 + 5/36 = 11/36"));
    out.references.push(Reference::new("y2_and_y3", p.y2_and_y3, "P'(Y_2 = 1, Y_3 = 1) = 1/6"));
    out.references.push(Reference::new("y2_zero_y3_one", p.y2_zero_y3_one, "P'(Y_2 = 0, Y_3 = 1) = 5/36"));
    out.references.push(Reference::new("product", p.product, "P'(Y_2 = 1) P'(Y_3 = 1) = 11/144"));
    let pairs = replicate(seed, 0, cfg.replicates, |rng| {
        let bits = assemble_bits(&realize_prefix(&spec, 3, rng)?, 3)?;
        Ok((bits.bits()[1], bits.bits()[2]))
    })?;
    let count = |f: &dyn Fn(&(u8, u8)) -> bool| pairs.iter().filter(|p| f(p)).count() as u64;
    proportion("y2", count(&|p| p.0 == 1), cfg, p.y2, &mut out)?;
    proportion("y3", count(&|p| p.1 == 1), cfg, p.y3, &mut out)?;
    let joint_hat = proportion("y2_and_y3", count(&|p| p.0 == 1 && p.1 == 1), cfg, p.y2_and_y3, &mut out)?;
    proportion("y2_zero_y3_one", count(&|p| p.0 == 0 && p.1 == 1), cfg, p.y2_zero_y3_one, &mut out)?;
    out.tests.push(dependence_record(joint_hat, p.y2_and_y3, p.product, cfg));
    Ok(out)
}

/// Cycle counts of Feller permutations against `E C_k = Var C_k = 1/k`.
fn feller_cycles(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let n = cfg.n.unwrap_or(200) as usize;
    let rows = replicate(seed, 0, cfg.replicates, |rng| {
        let d = feller_draw(n, rng)?;
        let cycles: [u64; REPORTED_ORDERS] =
            std::array::from_fn(|i| d.cycle_counts.get(&(i + 1)).copied().unwrap_or(0) as u64);
        // I_{n-k+1} closes a cycle with probability 1/k
        let late: [u64; REPORTED_ORDERS] = std::array::from_fn(|i| u64::from(d.indicators[n - 1 - i]));
        let agrees = indicators_to_counts(&d.indicators)? == d.cycle_counts;
        Ok((cycles, late, agrees))
    })?;
    for k in 1..=REPORTED_ORDERS {
        let inv = 1.0 / k as f64;
        out.references.push(Reference::new(
            format!("mean_c{k}"),
            inv,
            "for a uniform permutation of n >= 2k elements E C_k = 1/k and Var C_k = 1/k; limit Po(1/k)",
        ));
        let xs: Vec<f64> = rows.iter().map(|r| r.0[k - 1] as f64).collect();
        let t = moment_test(&xs, inv, inv, cfg.z_max)?;
        out.summaries.push(Summary::new(format!("mean_c{k}"), t.empirical_mean));
        out.tests.extend(TestRecord::from_moments(&format!("c{k}"), &t));
        let hits = rows.iter().map(|r| r.1[k - 1]).sum();
        proportion(&format!("indicator_{}", n - k + 1), hits, cfg, inv, &mut out)?;
    }
    let disagreements = rows.iter().filter(|r| !r.2).count();
    out.tests.push(TestRecord::new(
        "indicator_census_agreement",
        Some(0.0),
        Some(disagreements as f64),
        None,
        None,
        Verdict::from_pass(disagreements == 0),
    ));
    Ok(out)
}

/// Lehmer ranks of Feller permutations against the uniform law on `S_n`.
fn feller_uniformity(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let n = cfg.n.unwrap_or(4) as usize;
    let cats: usize = (1..=n).product();
    out.references.push(Reference::new("permutations", cats as f64, "n! equally likely permutations"));
    let ranks = replicate(seed, 0, cfg.replicates, |rng| Ok(lehmer_rank(&feller_draw(n, rng)?.perm)))?;
    let mut observed = vec![0u64; cats];
    for r in ranks {
        observed[r as usize] += 1;
    }
    let probs = vec![1.0 / cats as f64; cats];
    let labels: Vec<String> = (0..cats).map(|i| i.to_string()).collect();
    let g = chi2_categorical(&observed, &probs, &labels, cfg.alpha)?;
    out.tests.push(TestRecord::from_gof("uniformity", &g));
    Ok(out)
}

/// Exact law of windowed counts by enumeration against Monte Carlo.
fn enumeration_oracle(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let m = cfg.n.unwrap_or(12) as usize;
    let exact = enumerate_truncated::<f64>(BernModel::Bern, cfg.a, cfg.b, m, cfg.dmax)?;
    let exact_z1 = exact.marginal(1);
    let mean = exact.mean(1);
    let var = exact_z1.iter().map(|(&j, &p)| (j as f64 - mean).powi(2) * p).sum::<f64>();
    out.references.push(Reference::new(
        "mean_z1",
        mean,
        "exact windowed E Z_1 over all 2^m bit strings weighted by independent marginals",
    ));
    out.references.push(Reference::new("var_z1", var, "exact windowed Var Z_1 by enumeration"));
    let samples = replicate(seed, 0, cfg.replicates, |rng| count_strings(&gen_bern(cfg.a, cfg.b, m, rng)?, cfg.dmax))?;
    let z1: Vec<u64> = samples.iter().map(|z| z.get(1)).collect();
    let tv_z1 = tv_distance(&empirical_distribution(z1.iter().copied()), &exact_z1);
    let exact_full: BTreeMap<CountVector, f64> =
        exact.support.iter().cloned().zip(exact.probabilities.iter().copied()).collect();
    let tv_full = tv_distance(&empirical_distribution(samples.iter().cloned()), &exact_full);
    out.summaries.push(Summary::new("tv_z1", tv_z1));
    out.summaries.push(Summary::new("tv_count_vector", tv_full));
    out.tests.push(TestRecord::below("tv_z1", tv_z1, cfg.tv_threshold));
    let g = chi2_gof(&z1, |j| exact_z1.get(&j).copied().unwrap_or(0.0), cfg.alpha)?;
    out.tests.push(TestRecord::from_gof("z1_pmf", &g));
    let t = moment_test(&as_f64(&z1), mean, var, cfg.z_max)?;
    out.tests.extend(TestRecord::from_moments("z1", &t));
    Ok(out)
}

/// Tabulated mixture pmf and moments against sampled mixtures.
fn mixture_tables(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mix = MixtureSpec::bern(cfg.a, cfg.b)?;
    let kmax = (cfg.n.unwrap_or(REPORTED_ORDERS as u64) as usize).min(cfg.dmax).min(REPORTED_ORDERS);
    let rows = replicate(seed, 0, cfg.replicates, |rng| {
        Ok(first_orders(&sample_mixture_counts(&mix, cfg.dmax, rng)?))
    })?;
    for k in 1..=kmax {
        let (mean, var) = mixture_moments(&mix, k as u64)?;
        out.references.push(Reference::new(format!("mean_z{k}"), mean, mixture_provenance(&mix)));
        out.references.push(Reference::new(format!("var_z{k}"), var, mixture_provenance(&mix)));
        let mut cum = 0.0;
        for j in 0..=30u64 {
            let p = mixture_pmf(&mix, k as u64, j)?;
            out.references.push(Reference::new(
                format!("pmf_z{k}_{j}"),
                p,
                "integral over the mixing law of e^{-m} m^j / j! with m = a(1 - x^k)/k (Gauss-Legendre)",
            ));
            cum += p;
            if cum > 1.0 - 1e-6 {
                break;
            }
        }
        let xs = column(&rows, k - 1);
        let g = chi2_gof(&xs, |j| mixture_pmf(&mix, k as u64, j).unwrap_or(f64::NAN), cfg.alpha)?;
        out.tests.push(TestRecord::from_gof(format!("z{k}_pmf"), &g));
        let t = moment_test(&as_f64(&xs), mean, var, cfg.z_max)?;
        out.summaries.push(Summary::new(format!("mean_z{k}"), t.empirical_mean));
        out.tests.extend(TestRecord::from_moments(&format!("z{k}"), &t));
    }
    Ok(out)
}
