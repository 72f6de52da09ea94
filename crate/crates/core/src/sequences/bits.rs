use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which law produced a [`BitPrefix`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    Bern { a: f64, b: f64 },
    Bern1 { a: f64, b: f64 },
    CmppDerived(String),
    Raw,
}

/// A finite realized prefix `Y_1, ..., Y_N` of a Bernoulli sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitPrefix {
    bits: Vec<u8>,
    tag: ModelTag,
    truncated: bool,
}

impl BitPrefix {
    /// Untagged prefix; every entry must be 0 or 1.
    pub fn raw(bits: Vec<u8>) -> Result<Self> {
        Self::tagged(bits, ModelTag::Raw)
    }

    pub fn tagged(bits: Vec<u8>, tag: ModelTag) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(invalid(format!("bit {} at index {pos} is not 0 or 1", bits[pos])));
        }
        if matches!(tag, ModelTag::Bern1 { .. }) && bits.first() == Some(&0) {
            return Err(invalid("a Bern1 prefix must start with a 1"));
        }
        Ok(Self {
            bits,
            tag,
            truncated: false,
        })
    }

    pub(crate) fn from_parts(bits: Vec<u8>, tag: ModelTag, truncated: bool) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self {
            bits,
            tag,
            truncated,
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn tag(&self) -> &ModelTag {
        &self.tag
    }

    /// Set when the generating realization ran out of marks before the
    /// requested length; the trailing zeros are then not known to be zeros.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// 1-based positions of the ones.
    pub fn ones(&self) -> Vec<u64> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i as u64 + 1)
            .collect()
    }
}

/// Counts `Z_1, ..., Z_dmax` of d-strings plus an overflow bucket for longer
/// strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CountVector {
    counts: Vec<u64>,
    overflow: u64,
}

impl CountVector {
    pub fn zeros(dmax: usize) -> Result<Self> {
        if dmax == 0 {
            return Err(invalid("dmax must be at least 1"));
        }
        Ok(Self {
            counts: vec![0; dmax],
            overflow: 0,
        })
    }

    pub fn from_counts(counts: Vec<u64>, overflow: u64) -> Result<Self> {
        if counts.is_empty() {
            return Err(invalid("dmax must be at least 1"));
        }
        Ok(Self { counts, overflow })
    }

    pub fn dmax(&self) -> usize {
        self.counts.len()
    }

    /// `Z_d`; zero for `d == 0` or `d > dmax`.
    pub fn get(&self, d: usize) -> u64 {
        if d == 0 {
            return 0;
        }
        self.counts.get(d - 1).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    /// Number of gaps recorded, including the overflow bucket.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }

    /// Records one string of order `d` (in place).
    pub fn record(&mut self, d: u64) {
        debug_assert!(d >= 1);
        match usize::try_from(d) {
            Ok(d) if d >= 1 && d <= self.counts.len() => self.counts[d - 1] += 1,
            _ => self.overflow += 1,
        }
    }
}

/// Returns `z + W_n`: one more string of order `n`, or one more overflow
/// entry when `n > dmax`.
pub fn add_unit(z: &CountVector, n: u64) -> Result<CountVector> {
    if n == 0 {
        return Err(invalid("string order must be at least 1"));
    }
    let mut out = z.clone();
    out.record(n);
    Ok(out)
}

/// Windowed d-string counts of a prefix: a string is counted only when both
/// of its ones lie inside the prefix. Leading zeros contribute nothing.
pub fn count_strings(prefix: &BitPrefix, dmax: usize) -> Result<CountVector> {
    let mut z = CountVector::zeros(dmax)?;
    let mut last_one: Option<usize> = None;
    for (i, &b) in prefix.bits.iter().enumerate() {
        if b == 1 {
            if let Some(prev) = last_one {
                z.record((i - prev) as u64);
            }
            last_one = Some(i);
        }
    }
    Ok(z)
}

/// Same as [`count_strings`] from the ascending positions of the ones.
pub fn count_ones(ones: &[u64], dmax: usize) -> Result<CountVector> {
    let mut z = CountVector::zeros(dmax)?;
    for w in ones.windows(2) {
        debug_assert!(w[1] > w[0]);
        z.record(w[1] - w[0]);
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts_of(bits: &[u8], dmax: usize) -> CountVector {
        count_strings(&BitPrefix::raw(bits.to_vec()).unwrap(), dmax).unwrap()
    }

    #[test]
    fn hand_counts() {
        let z = counts_of(&[1, 1], 4);
        assert_eq!(z.counts(), &[1, 0, 0, 0]);
        let z = counts_of(&[1, 0, 1, 0, 0, 1], 4);
        assert_eq!(z.counts(), &[0, 1, 1, 0]);
        let z = counts_of(&[0, 0, 0, 1], 4);
        assert_eq!(z.total(), 0);
        let z = counts_of(&[], 4);
        assert_eq!(z.total(), 0);
    }

    #[test]
    fn long_gaps_overflow() {
        let z = counts_of(&[1, 0, 0, 0, 1, 1], 2);
        assert_eq!(z.counts(), &[1, 0]);
        assert_eq!(z.overflow(), 1);
        assert_eq!(z.total(), 2);
    }

    #[test]
    fn add_unit_cases() {
        let z = CountVector::zeros(3).unwrap();
        let z1 = add_unit(&z, 1).unwrap();
        assert_eq!(z1.get(1), 1);
        let z = CountVector::from_counts(vec![0, 5, 0], 0).unwrap();
        let z2 = add_unit(&z, 2).unwrap();
        assert_eq!(z2.counts(), &[0, 6, 0]);
        let z3 = add_unit(&z, 9).unwrap();
        assert_eq!(z3.counts(), z.counts());
        assert_eq!(z3.overflow(), 1);
        assert!(add_unit(&z, 0).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BitPrefix::raw(vec![0, 2]).is_err());
        assert!(BitPrefix::tagged(vec![0, 1], ModelTag::Bern1 { a: 1.0, b: 1.0 }).is_err());
        assert!(CountVector::zeros(0).is_err());
        assert!(count_strings(&BitPrefix::raw(vec![1]).unwrap(), 0).is_err());
    }

    proptest! {
        #[test]
        fn prepending_zeros_changes_nothing(bits in prop::collection::vec(0u8..=1, 0..80), pad in 0usize..20, dmax in 1usize..10) {
            let mut padded = vec![0u8; pad];
            padded.extend_from_slice(&bits);
            prop_assert_eq!(counts_of(&bits, dmax), counts_of(&padded, dmax));
        }

        #[test]
        fn gaps_fit_inside_prefix(bits in prop::collection::vec(0u8..=1, 0..80), dmax in 1usize..10) {
            let z = counts_of(&bits, dmax);
            let ones = bits.iter().filter(|&&b| b == 1).count() as u64;
            prop_assert_eq!(z.total(), ones.saturating_sub(1));
            let weighted: u64 = z.counts().iter().enumerate().map(|(i, &c)| (i as u64 + 1) * c).sum();
            // overflow strings are each longer than dmax
            prop_assert!(weighted + (dmax as u64 + 1) * z.overflow() <= bits.len() as u64);
            let prefix = BitPrefix::raw(bits.clone()).unwrap();
            prop_assert_eq!(count_ones(&prefix.ones(), dmax).unwrap(), z);
        }
    }
}
