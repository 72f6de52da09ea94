use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// One run of the Feller construction of a uniform permutation of `{0, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermDraw {
    /// `perm[i]` is the image of `i` (0-based).
    pub perm: Vec<usize>,
    /// `indicators[k - 1] = 1` iff the `k`-th draw closed a cycle.
    pub indicators: Vec<u8>,
    /// `k -> C_k`, the number of `k`-cycles; only nonzero entries are stored.
    pub cycle_counts: BTreeMap<usize, usize>,
}

impl PermDraw {
    pub fn n(&self) -> usize {
        self.perm.len()
    }
}

/// Feller draw: follow the current cycle, drawing each image uniformly from
/// the images not yet used; when the cycle's start is drawn the cycle closes
/// and the smallest unvisited element starts the next one. Draw `k` closes a
/// cycle with probability `1 / (n - k + 1)`.
pub fn feller_draw<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PermDraw> {
    if n == 0 {
        return Err(invalid("permutation size must be at least 1"));
    }
    let mut perm = vec![usize::MAX; n];
    let mut indicators = Vec::with_capacity(n);
    let mut unused: Vec<usize> = (0..n).collect();
    let mut visited = vec![false; n];
    let mut start = 0usize;
    let mut current = 0usize;
    visited[0] = true;
    for _ in 0..n {
        let idx = rng.random_range(0..unused.len());
        let image = unused.swap_remove(idx);
        perm[current] = image;
        if image == start {
            indicators.push(1);
            if let Some(next) = visited.iter().position(|v| !v) {
                start = next;
                current = next;
                visited[next] = true;
            }
        } else {
            indicators.push(0);
            visited[image] = true;
            current = image;
        }
    }
    let cycle_counts = cycle_census(&perm);
    Ok(PermDraw {
        perm,
        indicators,
        cycle_counts,
    })
}

/// Cycle type of a permutation given as an image table.
pub fn cycle_census(perm: &[usize]) -> BTreeMap<usize, usize> {
    let mut seen = vec![false; perm.len()];
    let mut census = BTreeMap::new();
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        *census.entry(len).or_insert(0) += 1;
    }
    census
}

/// Cycle counts from the cycle-completion indicators:
///
/// ```text
/// C_1 = I_1 + sum_{i<n} I_i I_{i+1}
/// C_k = prod_{l<k} (1 - I_l) I_k + sum_{i<=n-k} I_i prod_{l=i+1}^{i+k-1} (1 - I_l) I_{i+k}
/// ```
///
/// i.e. gaps between successive ones with a virtual one at position 0.
pub fn indicators_to_counts(indicators: &[u8]) -> Result<BTreeMap<usize, usize>> {
    match indicators.last() {
        None => return Err(invalid("indicator list is empty")),
        Some(&1) => {}
        Some(_) => return Err(invalid("the last Feller draw always closes a cycle")),
    }
    if indicators.iter().any(|&b| b > 1) {
        return Err(invalid("indicators must be 0 or 1"));
    }
    let mut counts = BTreeMap::new();
    let mut last = 0usize;
    for (i, &bit) in indicators.iter().enumerate() {
        if bit == 1 {
            *counts.entry(i + 1 - last).or_insert(0) += 1;
            last = i + 1;
        }
    }
    Ok(counts)
}

/// Lexicographic rank of a permutation in `0..n!` (Lehmer code).
pub fn lehmer_rank(perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&p| p < perm[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{child_stream, stream};

    /// Literal evaluation of the product formula for `C_k`.
    fn literal_counts(ind: &[u8], k: usize) -> usize {
        let n = ind.len();
        let i = |j: usize| ind[j - 1] as usize;
        if k == 1 {
            return i(1) + (1..n).map(|j| i(j) * i(j + 1)).sum::<usize>();
        }
        if k > n {
            return 0;
        }
        let head = (1..k).map(|l| 1 - i(l)).product::<usize>() * i(k);
        let body: usize = (1..=n - k)
            .map(|j| i(j) * (j + 1..j + k).map(|l| 1 - i(l)).product::<usize>() * i(j + k))
            .sum();
        head + body
    }

    #[test]
    fn trivial_cases() {
        let d = feller_draw(1, &mut stream(0)).unwrap();
        assert_eq!(d.perm, vec![0]);
        assert_eq!(d.cycle_counts, BTreeMap::from([(1, 1)]));
        assert!(feller_draw(0, &mut stream(0)).is_err());
        assert_eq!(indicators_to_counts(&[1, 1, 1]).unwrap(), BTreeMap::from([(1, 3)]));
        assert_eq!(indicators_to_counts(&[0, 0, 1]).unwrap(), BTreeMap::from([(3, 1)]));
        assert!(indicators_to_counts(&[1, 0]).is_err());
        assert!(indicators_to_counts(&[]).is_err());
    }

    #[test]
    fn draws_are_consistent() {
        for r in 0..10_000u64 {
            let d = feller_draw(12, &mut child_stream(77, r)).unwrap();
            let mut sorted = d.perm.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..12).collect::<Vec<_>>());
            assert_eq!(*d.indicators.last().unwrap(), 1);
            let cycles: usize = d.cycle_counts.values().sum();
            assert_eq!(d.indicators.iter().filter(|&&b| b == 1).count(), cycles);
            assert_eq!(d.cycle_counts.iter().map(|(k, c)| k * c).sum::<usize>(), 12);
            let from_ind = indicators_to_counts(&d.indicators).unwrap();
            assert_eq!(from_ind, d.cycle_counts);
            for k in 1..=12 {
                assert_eq!(literal_counts(&d.indicators, k), from_ind.get(&k).copied().unwrap_or(0));
            }
        }
    }

    #[test]
    fn lehmer_rank_is_a_bijection_on_s4() {
        let mut seen = std::collections::HashSet::new();
        let mut perm = vec![0usize, 1, 2, 3];
        fn permute(p: &mut Vec<usize>, k: usize, seen: &mut std::collections::HashSet<u64>) {
            if k == p.len() {
                seen.insert(lehmer_rank(p));
                return;
            }
            for i in k..p.len() {
                p.swap(k, i);
                permute(p, k + 1, seen);
                p.swap(k, i);
            }
        }
        permute(&mut perm, 0, &mut seen);
        assert_eq!(seen.len(), 24);
        assert!(seen.iter().all(|&r| r < 24));
        assert_eq!(lehmer_rank(&[0, 1, 2, 3]), 0);
        assert_eq!(lehmer_rank(&[3, 2, 1, 0]), 23);
    }
}
