use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bits::{BitPrefix, ModelTag};
use crate::error::{invalid, Result};
use crate::exact::special::ln_gamma_ratio;

/// The two independent harmonic sequences.
///
/// - `Bern(a, b)`: `P(Y_n = 1) = a / (a + b + n - 1)` for `n >= 1`.
/// - `Bern1(a, b)`: `Y_1 = 1` and `P(Y_n = 1) = a / (a + b + n - 2)` for `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BernModel {
    Bern,
    Bern1,
}

/// Positions up to this index are drawn bit by bit; later ones by inverting
/// the gap survival function.
const BITWISE_PREFIX: u64 = 64;

/// A validated `Bern(a, b)` or `Bern1(a, b)` law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernSequence {
    model: BernModel,
    a: f64,
    b: f64,
}

impl BernSequence {
    pub fn new(model: BernModel, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("a must be positive and finite, got {a}")));
        }
        if !(b >= 0.0) || !b.is_finite() {
            return Err(invalid(format!("b must be nonnegative and finite, got {b}")));
        }
        Ok(Self { model, a, b })
    }

    pub fn bern(a: f64, b: f64) -> Result<Self> {
        Self::new(BernModel::Bern, a, b)
    }

    pub fn bern1(a: f64, b: f64) -> Result<Self> {
        Self::new(BernModel::Bern1, a, b)
    }

    pub fn model(&self) -> BernModel {
        self.model
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tag(&self) -> ModelTag {
        match self.model {
            BernModel::Bern => ModelTag::Bern { a: self.a, b: self.b },
            BernModel::Bern1 => ModelTag::Bern1 { a: self.a, b: self.b },
        }
    }

    /// `P(Y_n = 1)` for 1-based `n`.
    pub fn success_prob(&self, n: u64) -> f64 {
        assert!(n >= 1, "positions are 1-based");
        match self.model {
            BernModel::Bern => self.a / (self.a + self.b + (n - 1) as f64),
            BernModel::Bern1 if n == 1 => 1.0,
            BernModel::Bern1 => self.a / (self.a + self.b + (n - 2) as f64),
        }
    }

    /// Offset `c` with `P(Y_j = 1) = a / (a + c + j)` away from the start.
    fn offset(&self) -> f64 {
        match self.model {
            BernModel::Bern => self.b - 1.0,
            BernModel::Bern1 => self.b - 2.0,
        }
    }

    fn draw_bit<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> bool {
        let p = self.success_prob(n);
        // certain successes consume no randomness
        p >= 1.0 || rng.random::<f64>() < p
    }

    /// Samples `Y_1, ..., Y_n` bit by bit.
    pub fn sample_bits<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> BitPrefix {
        let bits = (1..=n as u64)
            .map(|k| u8::from(self.draw_bit(k, rng)))
            .collect();
        BitPrefix::from_parts(bits, self.tag(), false)
    }

    /// Position of the first 1 strictly after `after`, or `None` if there is
    /// none up to and including `limit`.
    ///
    /// Early positions are drawn bit by bit. Past [`BITWISE_PREFIX`] the gap is
    /// drawn by inverting `P(no 1 in (after, m]) = Γ(c+m+1)Γ(a+c+after+1) /
    /// (Γ(c+after+1)Γ(a+c+m+1))`, which has the same law.
    pub fn next_one<R: Rng + ?Sized>(&self, after: u64, limit: u64, rng: &mut R) -> Option<u64> {
        let mut pos = after;
        while pos < limit && pos < BITWISE_PREFIX {
            pos += 1;
            if self.draw_bit(pos, rng) {
                return Some(pos);
            }
        }
        if pos >= limit {
            return None;
        }
        let (a, c) = (self.a, self.offset());
        let base = ln_gamma_ratio(c + pos as f64 + 1.0, a);
        let ln_survival = |m: u64| base - ln_gamma_ratio(c + m as f64 + 1.0, a);
        let ln_u = (1.0 - rng.random::<f64>()).ln();
        if ln_survival(limit) >= ln_u {
            return None;
        }
        // invariant: survival(lo) >= u > survival(hi)
        let mut lo = pos;
        let mut step = 1u64;
        let mut hi = pos + 1;
        while ln_survival(hi) >= ln_u {
            lo = hi;
            step = step.saturating_mul(2);
            hi = pos.saturating_add(step).min(limit);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ln_survival(mid) >= ln_u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }

    /// Ascending positions of the ones among `Y_1, ..., Y_len`.
    pub fn sample_ones<R: Rng + ?Sized>(&self, len: u64, rng: &mut R) -> Vec<u64> {
        let mut ones = Vec::new();
        let mut pos = 0;
        while let Some(next) = self.next_one(pos, len, rng) {
            ones.push(next);
            pos = next;
        }
        ones
    }
}

/// `n` bits of `Bern(a, b)`.
pub fn gen_bern<R: Rng + ?Sized>(a: f64, b: f64, n: usize, rng: &mut R) -> Result<BitPrefix> {
    if n == 0 {
        return Err(invalid("prefix length must be at least 1"));
    }
    Ok(BernSequence::bern(a, b)?.sample_bits(n, rng))
}

/// `n` bits of `Bern1(a, b)`; the first bit is always 1.
pub fn gen_bern1<R: Rng + ?Sized>(a: f64, b: f64, n: usize, rng: &mut R) -> Result<BitPrefix> {
    if n == 0 {
        return Err(invalid("prefix length must be at least 1"));
    }
    Ok(BernSequence::bern1(a, b)?.sample_bits(n, rng))
}
