//! Conditional marked Poisson process models.
//!
//! A model draws an initial value `X_0` from a density `g`, then (given `X_0`)
//! a nonhomogeneous Poisson process `X_1 < X_2 < ...` with intensity
//! `λ_{X_0}`, an initial mark `L_0 ~ r(X_0, ·)` and marks `L_i ~ q(X_i, ·)`.
//! The marks are the gaps between successive ones of a Bernoulli sequence:
//! `Y_n = 1` exactly at the partial sums `L_0, L_0 + L_1, ...`. Given `X_0`
//! the d-string counts are independent Poisson with means
//! `∫ λ_{X_0}(x) q(x, d) dx`.

mod marks;
mod mixture;
mod model;
mod points;
mod realize;

pub use marks::{sample_mark_q, sample_mark_rplus, MarkLaw, MarkSampler};
pub use mixture::{
    sample_bern1_counts_recurrence, sample_conditional_counts, sample_mixture_counts, MixingLaw,
    MixtureSpec,
};
pub use model::{CmppSpec, CmppTag, InitialLaw, InitialSampler, Intensity, IntensitySampler};
pub use points::{record_points, sample_points};
pub use realize::{
    assemble_bits, counts_from_marks, counts_from_marks_within, epsilon_for_tolerance, realize,
    realize_prefix, PointRealization, Truncation, DEFAULT_MARK_LOSS_TOLERANCE,
};
