use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::stats::{DEFAULT_ALPHA, DEFAULT_Z_MAX, MIN_SAMPLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    /// Windowed counts of Bern(a, b) against the Poisson mixture moments.
    BernCounts,
    /// Z_1 of Bern1(a, b): moments and the sign of its overdispersion.
    Bern1Counts,
    /// Recurrence sampler for Bern1(a, b) against direct simulation.
    Bern1Recurrence,
    /// Marked Poisson construction against direct Bern(a, b) generation.
    CmppEquivalence,
    /// First two bits under the r+ initial mark, and r-independence of counts.
    PlusDependence,
    /// Bits 2 and 3 when the first two marked points are exchanged.
    SwappedDependence,
    /// Cycle counts of Feller permutations.
    FellerCycles,
    /// Uniformity of Feller permutations.
    FellerUniformity,
    /// Exact enumeration against Monte Carlo windowed counts.
    EnumerationOracle,
    /// Mixture pmf and moments against sampled mixtures.
    MixtureTables,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 10] = [
        ExperimentName::BernCounts,
        ExperimentName::Bern1Counts,
        ExperimentName::Bern1Recurrence,
        ExperimentName::CmppEquivalence,
        ExperimentName::PlusDependence,
        ExperimentName::SwappedDependence,
        ExperimentName::FellerCycles,
        ExperimentName::FellerUniformity,
        ExperimentName::EnumerationOracle,
        ExperimentName::MixtureTables,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::BernCounts => "bern-counts",
            ExperimentName::Bern1Counts => "bern1-counts",
            ExperimentName::Bern1Recurrence => "bern1-recurrence",
            ExperimentName::CmppEquivalence => "cmpp-equivalence",
            ExperimentName::PlusDependence => "plus-dependence",
            ExperimentName::SwappedDependence => "swapped-dependence",
            ExperimentName::FellerCycles => "feller-cycles",
            ExperimentName::FellerUniformity => "feller-uniformity",
            ExperimentName::EnumerationOracle => "enumeration-oracle",
            ExperimentName::MixtureTables => "mixture-tables",
        }
    }
}

impl std::fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Total truncation bias targeted by the automatic horizon of `bern-counts`.
pub const BERN_BIAS_TARGET: f64 = 1e-2;
/// Same for `bern1-counts` and `bern1-recurrence`.
pub const BERN1_BIAS_TARGET: f64 = 1e-4;

/// Parameters of one run. `n` is the horizon, prefix length or permutation
/// size depending on the experiment; `None` picks the experiment's default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    pub a: f64,
    pub b: f64,
    pub n: Option<u64>,
    pub replicates: u64,
    pub dmax: usize,
    pub seed: u64,
    pub alpha: f64,
    pub z_max: f64,
    pub mark_loss_tolerance: f64,
    pub tv_threshold: f64,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentName) -> Self {
        Self {
            experiment,
            a: 1.0,
            b: 0.0,
            n: None,
            replicates: 100_000,
            dmax: crate::sequences::DEFAULT_DMAX,
            seed: 1,
            alpha: DEFAULT_ALPHA,
            z_max: DEFAULT_Z_MAX,
            mark_loss_tolerance: crate::cmpp::DEFAULT_MARK_LOSS_TOLERANCE,
            tv_threshold: 0.005,
        }
    }

    pub fn with_params(mut self, a: f64, b: f64) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    pub fn with_replicates(mut self, replicates: u64) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dmax(mut self, dmax: usize) -> Self {
        self.dmax = dmax;
        self
    }

    /// Checks every precondition before any sampling starts.
    pub fn validate(&self) -> Result<()> {
        use ExperimentName::*;
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(invalid(format!("--a must be positive and finite, got {}", self.a)));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return Err(invalid(format!("--b must be nonnegative and finite, got {}", self.b)));
        }
        if self.replicates < MIN_SAMPLE as u64 {
            return Err(invalid(format!("--replicates must be at least {MIN_SAMPLE}")));
        }
        if self.dmax == 0 {
            return Err(invalid("--dmax must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid("alpha must lie in (0, 1)"));
        }
        if !(self.z_max > 0.0) || !(self.mark_loss_tolerance > 0.0) || !(self.tv_threshold > 0.0) {
            return Err(invalid("z_max, mark-loss tolerance and TV threshold must be positive"));
        }
        let n = self.n;
        match self.experiment {
            BernCounts | Bern1Counts | Bern1Recurrence => {
                if n.is_some_and(|n| n <= self.dmax as u64) {
                    return Err(invalid("--n must exceed --dmax"));
                }
            }
            CmppEquivalence | MixtureTables => {
                if n.is_some_and(|n| !(1..=16).contains(&n)) {
                    return Err(invalid("--n (prefix length) must lie in 1..=16"));
                }
            }
            PlusDependence => {
                if self.b <= 0.0 {
                    return Err(invalid("plus-dependence needs b > 0"));
                }
            }
            SwappedDependence => {}
            FellerCycles => {
                if n.is_some_and(|n| n < 10) {
                    return Err(invalid("feller-cycles needs n >= 10"));
                }
            }
            FellerUniformity => {
                if n.is_some_and(|n| !(2..=8).contains(&n)) {
                    return Err(invalid("feller-uniformity needs 2 <= n <= 8"));
                }
            }
            EnumerationOracle => {
                if n.is_some_and(|n| !(2..=crate::exact::MAX_ENUMERATION_HORIZON as u64).contains(&n)) {
                    return Err(invalid(format!(
                        "enumeration horizon must lie in 2..={}",
                        crate::exact::MAX_ENUMERATION_HORIZON
                    )));
                }
            }
        }
        Ok(())
    }
}
