use serde::{Deserialize, Serialize};

use super::gamma::chi2_sf;
use super::{require_sample, Verdict, MIN_EXPECTED};
use crate::error::{invalid, Error, Result};

/// One pooled chi-square cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub label: String,
    pub observed: f64,
    pub expected: f64,
}

/// Outcome of a Pearson chi-square test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: Vec<Bin>,
    pub alpha: f64,
    pub verdict: Verdict,
}

impl GofResult {
    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// Groups consecutive cells left to right until each group's expected count
/// reaches [`MIN_EXPECTED`]; a short remainder joins the last group.
/// Returns the half-open index ranges of the groups.
pub fn pool_bins(expected: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    let mut acc = 0.0;
    for (i, &e) in expected.iter().enumerate() {
        acc += e;
        if acc >= MIN_EXPECTED {
            groups.push(start..i + 1);
            start = i + 1;
            acc = 0.0;
        }
    }
    if start < expected.len() {
        match groups.last_mut() {
            Some(last) => last.end = expected.len(),
            None => groups.push(start..expected.len()),
        }
    }
    groups
}

fn label_of(labels: &[String], r: &std::ops::Range<usize>) -> String {
    if r.len() == 1 {
        labels[r.start].clone()
    } else {
        format!("{}..{}", labels[r.start], labels[r.end - 1])
    }
}

fn finish(statistic: f64, bins: Vec<Bin>, dof: usize, alpha: f64) -> Result<GofResult> {
    if dof == 0 {
        return Err(Error::TooFewBins(bins.len()));
    }
    let p_value = chi2_sf(statistic, dof)?;
    Ok(GofResult {
        statistic,
        dof,
        p_value,
        bins,
        alpha,
        verdict: Verdict::from_pass(p_value > alpha),
    })
}

/// Pearson test of category counts against category probabilities, which
/// must sum to one within `1e-9`. Cells are pooled first.
pub fn chi2_categorical(observed: &[u64], probs: &[f64], labels: &[String], alpha: f64) -> Result<GofResult> {
    if observed.len() != probs.len() || labels.len() != probs.len() {
        return Err(invalid("observed, probabilities and labels must have equal length"));
    }
    if probs.iter().any(|&p| !(p >= 0.0)) {
        return Err(invalid("probabilities must be nonnegative"));
    }
    let mass: f64 = probs.iter().sum();
    if (mass - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("probabilities sum to {mass}, not 1")));
    }
    let n: u64 = observed.iter().sum();
    require_sample(n as usize)?;
    let expected: Vec<f64> = probs.iter().map(|p| p * n as f64).collect();
    let groups = pool_bins(&expected);
    let mut statistic = 0.0;
    let mut bins = Vec::with_capacity(groups.len());
    for r in &groups {
        let o: f64 = observed[r.clone()].iter().map(|&c| c as f64).sum();
        let e: f64 = expected[r.clone()].iter().sum();
        if e > 0.0 {
            statistic += (o - e) * (o - e) / e;
        } else if o > 0.0 {
            statistic = f64::INFINITY;
        }
        bins.push(Bin { label: label_of(labels, r), observed: o, expected: e });
    }
    let dof = groups.len().saturating_sub(1);
    finish(statistic, bins, dof, alpha)
}

/// Goodness of fit of integer samples to a pmf on `{0, 1, ...}`. Cells run up
/// to the sample maximum, with the remaining mass in a final tail cell.
pub fn chi2_gof(samples: &[u64], pmf: impl Fn(u64) -> f64, alpha: f64) -> Result<GofResult> {
    require_sample(samples.len())?;
    let top = *samples.iter().max().expect("nonempty");
    // include enough cells for the pmf to show its mass even if unsampled
    let mut probs: Vec<f64> = Vec::new();
    let mut cum = 0.0;
    let mut j = 0u64;
    while j <= top || (cum < 1.0 - 1e-12 && j < top + 10_000) {
        let p = pmf(j);
        if !(p >= 0.0) {
            return Err(invalid(format!("pmf({j}) = {p} is not a probability")));
        }
        probs.push(p);
        cum += p;
        j += 1;
    }
    let mut observed = vec![0u64; probs.len() + 1];
    for &s in samples {
        observed[s as usize] += 1;
    }
    probs.push((1.0 - cum).max(0.0));
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("pmf has total mass {total}")));
    }
    let mut labels: Vec<String> = (0..probs.len() - 1).map(|j| j.to_string()).collect();
    labels.push(format!(">={}", probs.len() - 1));
    chi2_categorical(&observed, &probs, &labels, alpha)
}

/// Chi-square homogeneity test of two category-count vectors. Cells are
/// pooled on the smaller row's expected counts.
pub fn two_sample_categorical(a: &[u64], b: &[u64], labels: &[String], alpha: f64) -> Result<GofResult> {
    if a.len() != b.len() || labels.len() != a.len() {
        return Err(invalid("count vectors and labels must have equal length"));
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    require_sample(na as usize)?;
    require_sample(nb as usize)?;
    let n = na + nb;
    let smaller = na.min(nb);
    let pooled_expect: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| (x + y) as f64 * smaller / n).collect();
    let groups = pool_bins(&pooled_expect);
    let mut statistic = 0.0;
    let mut bins = Vec::with_capacity(groups.len());
    for r in &groups {
        let oa: f64 = a[r.clone()].iter().map(|&c| c as f64).sum();
        let ob: f64 = b[r.clone()].iter().map(|&c| c as f64).sum();
        let col = oa + ob;
        let (ea, eb) = (col * na / n, col * nb / n);
        if col > 0.0 {
            statistic += (oa - ea).powi(2) / ea + (ob - eb).powi(2) / eb;
        }
        bins.push(Bin { label: label_of(labels, r), observed: oa, expected: ea });
    }
    let dof = groups.len().saturating_sub(1);
    finish(statistic, bins, dof, alpha)
}

/// Homogeneity of two integer samples, one cell per value.
pub fn two_sample_counts(a: &[u64], b: &[u64], alpha: f64) -> Result<GofResult> {
    require_sample(a.len())?;
    require_sample(b.len())?;
    let top = a.iter().chain(b).copied().max().expect("nonempty") as usize;
    let mut ca = vec![0u64; top + 1];
    let mut cb = vec![0u64; top + 1];
    for &x in a {
        ca[x as usize] += 1;
    }
    for &x in b {
        cb[x as usize] += 1;
    }
    let labels: Vec<String> = (0..=top).map(|j| j.to_string()).collect();
    two_sample_categorical(&ca, &cb, &labels, alpha)
}
