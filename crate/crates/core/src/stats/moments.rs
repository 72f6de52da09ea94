use serde::{Deserialize, Serialize};

use super::{require_sample, Verdict};
use crate::error::{invalid, Result};

/// Mean and variance of a sample compared with theory by z-scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTest {
    pub empirical_mean: f64,
    pub empirical_var: f64,
    pub theoretical_mean: f64,
    pub theoretical_var: f64,
    /// z-scores of the mean and of the variance, in that order.
    pub z_scores: Vec<f64>,
    pub z_max: f64,
    pub verdict: Verdict,
}

/// A single estimate compared with a reference through its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZTest {
    pub estimate: f64,
    pub reference: f64,
    pub std_error: f64,
    pub z: f64,
    pub z_max: f64,
    pub verdict: Verdict,
}

impl ZTest {
    fn new(estimate: f64, reference: f64, std_error: f64, z_max: f64) -> Self {
        let z = z_score(estimate - reference, std_error);
        Self {
            estimate,
            reference,
            std_error,
            z,
            z_max,
            verdict: Verdict::from_pass(z.abs() <= z_max),
        }
    }
}

/// Deviation over standard error; a nonzero deviation with zero error maps
/// to the largest finite value of its sign so scores stay finite.
fn z_score(dev: f64, se: f64) -> f64 {
    if se > 0.0 {
        dev / se
    } else if dev == 0.0 {
        0.0
    } else {
        f64::MAX.copysign(dev)
    }
}

struct Summary {
    n: f64,
    mean: f64,
    /// unbiased sample variance
    var: f64,
    /// central moments about the sample mean
    m2: f64,
    m4: f64,
}

fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    Summary { n, mean, var: m2 / (n - 1.0), m2: m2 / n, m4: m4 / n }
}

/// z-test of the sample mean (standard error from the theoretical variance)
/// and of the sample variance (standard error `sqrt((m4 - m2^2) / n)` from
/// the empirical fourth central moment).
pub fn moment_test(samples: &[f64], theoretical_mean: f64, theoretical_var: f64, z_max: f64) -> Result<MomentTest> {
    require_sample(samples.len())?;
    if !(theoretical_var >= 0.0) {
        return Err(invalid(format!("theoretical variance {theoretical_var} is negative")));
    }
    let s = summarize(samples);
    if theoretical_var == 0.0 && s.m2 > 0.0 {
        return Err(invalid("zero theoretical variance but the sample is not constant"));
    }
    let z_mean = z_score(s.mean - theoretical_mean, (theoretical_var / s.n).sqrt());
    let se_var = ((s.m4 - s.m2 * s.m2).max(0.0) / s.n).sqrt();
    let z_var = z_score(s.var - theoretical_var, se_var);
    let z_scores = vec![z_mean, z_var];
    let verdict = Verdict::from_pass(z_scores.iter().all(|z| z.abs() <= z_max));
    Ok(MomentTest {
        empirical_mean: s.mean,
        empirical_var: s.var,
        theoretical_mean,
        theoretical_var,
        z_scores,
        z_max,
        verdict,
    })
}

/// Overdispersion `Var - Mean` of a sample against a reference value. The
/// standard error is the sample deviation of the influence function
/// `(x - μ)^2 - σ^2 - (x - μ)` over `sqrt(n)`.
pub fn dispersion_test(samples: &[f64], reference: f64, z_max: f64) -> Result<ZTest> {
    require_sample(samples.len())?;
    let s = summarize(samples);
    let infl: Vec<f64> = samples
        .iter()
        .map(|&x| {
            let d = x - s.mean;
            d * d - s.m2 - d
        })
        .collect();
    let var_infl = infl.iter().map(|v| v * v).sum::<f64>() / (s.n - 1.0);
    Ok(ZTest::new(s.var - s.mean, reference, (var_infl / s.n).sqrt(), z_max))
}

/// Binomial proportion against `p`, with the standard error under `p`.
pub fn proportion_test(successes: u64, trials: u64, p: f64, z_max: f64) -> Result<ZTest> {
    require_sample(trials as usize)?;
    if successes > trials || !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("bad proportion {successes}/{trials} against p = {p}")));
    }
    let n = trials as f64;
    Ok(ZTest::new(successes as f64 / n, p, (p * (1.0 - p) / n).sqrt(), z_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand_distr::{Distribution, Poisson};

    fn poisson(mean: f64, n: usize, seed: u64) -> Vec<f64> {
        let d = Poisson::new(mean).unwrap();
        let mut rng = stream(seed);
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    #[test]
    fn constant_sample_matches_point_mass() {
        let xs = vec![3.0; 2000];
        let t = moment_test(&xs, 3.0, 0.0, 4.0).unwrap();
        assert_eq!(t.z_scores, vec![0.0, 0.0]);
        assert!(t.verdict.is_pass());
        let off = moment_test(&xs, 2.0, 0.0, 4.0).unwrap();
        assert!(!off.verdict.is_pass());
        assert!(off.z_scores.iter().all(|z| z.is_finite()));
    }

    #[test]
    fn nonconstant_sample_against_point_mass_is_error() {
        let mut xs = vec![3.0; 2000];
        xs[7] = 4.0;
        assert!(moment_test(&xs, 3.0, 0.0, 4.0).is_err());
        assert!(moment_test(&xs[..10], 3.0, 1.0, 4.0).is_err());
    }

    #[test]
    fn poisson_moments_and_dispersion() {
        let xs = poisson(2.0, 200_000, 3);
        assert!(moment_test(&xs, 2.0, 2.0, 4.0).unwrap().verdict.is_pass());
        assert!(!moment_test(&xs, 2.1, 2.0, 4.0).unwrap().verdict.is_pass());
        assert!(dispersion_test(&xs, 0.0, 4.0).unwrap().verdict.is_pass());
    }

    #[test]
    fn dispersion_detects_underdispersion() {
        // Binomial(2, 1/2): Var - Mean = 1/2 - 1 = -1/2
        let mut rng = stream(4);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| {
                use rand::Rng;
                (rng.random::<bool>() as u8 + rng.random::<bool>() as u8) as f64
            })
            .collect();
        let t = dispersion_test(&xs, -0.5, 4.0).unwrap();
        assert!(t.verdict.is_pass(), "z {}", t.z);
        let zero = dispersion_test(&xs, 0.0, 4.0).unwrap();
        assert!(zero.z < -4.0);
    }

    #[test]
    fn proportions() {
        let t = proportion_test(400_000, 1_000_000, 0.4, 4.0).unwrap();
        assert_eq!(t.z, 0.0);
        assert!(proportion_test(10, 5, 0.5, 4.0).is_err());
        assert!(!proportion_test(600, 1000, 0.4, 4.0).unwrap().verdict.is_pass());
    }
}
