//! Closed-form and numerically exact reference quantities.

mod closed_forms;
mod cylinder;
mod enumerate;
mod mixture;
pub mod quadrature;
pub mod special;

pub use closed_forms::{
    horizon_for_bias, overdispersion_z1, plus_model_probs, second_success_ln_survival,
    second_success_pmf, swapped_model_probs, truncation_bias_bound, z1_moments, PlusProbs,
    SwappedProbs, Z1Moments,
};
pub use cylinder::{
    bit_pattern_prob, cylinder_prob_bern1, cylinder_prob_integral, cylinder_prob_product,
    marginal, CylinderPattern,
};
pub use enumerate::{enumerate_truncated, ExactDistribution, MAX_ENUMERATION_HORIZON};
pub use mixture::{mixture_moments, mixture_pmf, poisson_pmf};
pub use special::{beta_fn, ln_beta, ln_gamma, ln_gamma_ratio};
