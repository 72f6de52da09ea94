//! Direct generators for harmonic Bernoulli sequences, windowed d-string
//! counting and the Feller permutation construction.

mod bits;
mod feller;
mod generate;

pub use bits::{add_unit, count_ones, count_strings, BitPrefix, CountVector, ModelTag};
pub use feller::{cycle_census, feller_draw, indicators_to_counts, lehmer_rank, PermDraw};
pub use generate::{gen_bern, gen_bern1, BernModel, BernSequence};

/// Default largest string order tracked individually.
pub const DEFAULT_DMAX: usize = 16;
