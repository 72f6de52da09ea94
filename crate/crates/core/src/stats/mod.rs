//! Statistical verdicts comparing Monte Carlo samples with reference laws.
//!
//! Every test reports its statistic, a p-value or z-score, and a
//! [`Verdict`] at a stated level. Single tests run at `α = 1e-3` and
//! z-score tests at `|z| <= 4` by default.

mod chi2;
mod distance;
mod gamma;
mod moments;

pub use chi2::{chi2_categorical, chi2_gof, pool_bins, two_sample_categorical, two_sample_counts, Bin, GofResult};
pub use distance::{empirical_distribution, tv_distance};
pub use gamma::{chi2_cdf, chi2_sf, gamma_p, gamma_q};
pub use moments::{dispersion_test, moment_test, proportion_test, MomentTest, ZTest};

use serde::{Deserialize, Serialize};

/// Significance level of a single test.
pub const DEFAULT_ALPHA: f64 = 1e-3;
/// Largest accepted absolute z-score.
pub const DEFAULT_Z_MAX: f64 = 4.0;
/// Smallest sample accepted by the tests.
pub const MIN_SAMPLE: usize = 1000;
/// Smallest expected count of a pooled chi-square bin.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

pub(crate) fn require_sample(got: usize) -> crate::Result<()> {
    if got < MIN_SAMPLE {
        return Err(crate::Error::SampleTooSmall { got, need: MIN_SAMPLE });
    }
    Ok(())
}
