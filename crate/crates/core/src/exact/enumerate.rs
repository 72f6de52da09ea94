//! Brute-force law of windowed count vectors over all `2^m` bit strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::cylinder::marginal;
use crate::scalar::Scalar;
use crate::sequences::{BernModel, CountVector};

/// Largest horizon accepted by [`enumerate_truncated`].
pub const MAX_ENUMERATION_HORIZON: usize = 24;

/// Finite law over count vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactDistribution<T> {
    pub horizon: usize,
    pub support: Vec<CountVector>,
    pub probabilities: Vec<T>,
}

impl<T: Scalar> ExactDistribution<T> {
    pub fn total(&self) -> T {
        self.probabilities.iter().cloned().fold(T::zero(), |a, p| a + p)
    }

    /// Law of `Z_d` alone.
    pub fn marginal(&self, d: usize) -> BTreeMap<u64, T> {
        let mut out: BTreeMap<u64, T> = BTreeMap::new();
        for (z, p) in self.support.iter().zip(&self.probabilities) {
            let slot = out.entry(z.get(d)).or_insert_with(T::zero);
            *slot = slot.clone() + p.clone();
        }
        out
    }

    /// `E Z_d`.
    pub fn mean(&self, d: usize) -> T {
        self.support
            .iter()
            .zip(&self.probabilities)
            .fold(T::zero(), |acc, (z, p)| acc + T::from_u64(z.get(d)) * p.clone())
    }

    pub fn to_f64(&self) -> ExactDistribution<f64> {
        ExactDistribution {
            horizon: self.horizon,
            support: self.support.clone(),
            probabilities: self.probabilities.iter().map(Scalar::to_f64).collect(),
        }
    }
}

struct Walker<'a, T> {
    p_one: &'a [T],
    acc: BTreeMap<CountVector, T>,
}

impl<T: Scalar> Walker<'_, T> {
    fn walk(&mut self, pos: usize, last_one: Option<usize>, z: &mut CountVector, prob: T) {
        if prob == T::zero() {
            return;
        }
        if pos == self.p_one.len() {
            let slot = self.acc.entry(z.clone()).or_insert_with(T::zero);
            *slot = slot.clone() + prob;
            return;
        }
        let p = self.p_one[pos].clone();
        self.walk(pos + 1, last_one, z, prob.clone() * (T::one() - p.clone()));
        match last_one {
            Some(prev) => {
                let mut next = z.clone();
                next.record((pos - prev) as u64);
                self.walk(pos + 1, Some(pos), &mut next, prob * p);
            }
            None => self.walk(pos + 1, Some(pos), z, prob * p),
        }
    }
}

/// Exact law of the windowed count vector of `Y_1, ..., Y_m` under an
/// independent model, by visiting every bit string with positive
/// probability. With rational `a` and `b` the result is exact.
pub fn enumerate_truncated<T: Scalar>(
    model: BernModel,
    a: T,
    b: T,
    m: usize,
    dmax: usize,
) -> Result<ExactDistribution<T>> {
    if !(a > T::zero()) || b < T::zero() {
        return Err(invalid("need a > 0 and b >= 0"));
    }
    if m == 0 {
        return Err(invalid("horizon must be at least 1"));
    }
    if m > MAX_ENUMERATION_HORIZON {
        return Err(Error::HorizonTooLarge(m));
    }
    let p_one: Vec<T> = (1..=m as u64).map(|n| marginal(model, &a, &b, n)).collect();
    let mut walker = Walker {
        p_one: &p_one,
        acc: BTreeMap::new(),
    };
    let mut z = CountVector::zeros(dmax)?;
    walker.walk(0, None, &mut z, T::one());
    let (support, probabilities) = walker.acc.into_iter().unzip();
    Ok(ExactDistribution {
        horizon: m,
        support,
        probabilities,
    })
}
