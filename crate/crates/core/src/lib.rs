//! Simulation and exact reference laws for counts of d-strings in Bernoulli
//! sequences.
//!
//! A d-string occurs in a 0/1 sequence when a 1 is followed by exactly `d - 1`
//! zeros and then another 1. This crate generates the harmonic Bernoulli
//! sequences `Bern(a, b)` and `Bern1(a, b)` directly, generates them again
//! through a conditional marked Poisson process, evaluates the closed-form
//! count laws, and checks simulation against theory with goodness-of-fit
//! machinery.
//!
//! Modules:
//! - [`sequences`]: direct generators, windowed d-string counting, Feller draws.
//! - [`cmpp`]: conditional marked Poisson process models and samplers.
//! - [`exact`]: closed forms, quadrature, special functions, enumeration oracle.
//! - [`stats`]: chi-square, moment, dispersion and total-variation tests.
//! - [`experiment`]: named reproducible experiments and their reports.

pub mod cmpp;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod rng;
pub mod scalar;
pub mod sequences;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Arbitrary-precision rational used by the exact enumeration path.
pub type Rational = num_rational::BigRational;

/// Count-vector law with floating point probabilities.
pub type ExactDistributionF64 = exact::ExactDistribution<f64>;

/// Count-vector law with exact rational probabilities.
pub type ExactDistributionQ = exact::ExactDistribution<Rational>;

/// Moments of `Z_1` under `Bern1(a, b)` in `f64`.
pub type Z1MomentsF64 = exact::Z1Moments<f64>;

/// Dependent-sequence probabilities for the `r+` initial-mark model, exact.
pub type PlusProbsQ = exact::PlusProbs<Rational>;

/// Swapped-model constants, exact.
pub type SwappedProbsQ = exact::SwappedProbs<Rational>;
