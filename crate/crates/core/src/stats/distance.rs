use std::collections::BTreeMap;

/// Total variation `½ Σ |p - q|` over the union of the two supports.
pub fn tv_distance<K: Ord + Clone>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &pv) in p {
        sum += (pv - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &qv) in q {
        if !p.contains_key(k) {
            sum += qv.abs();
        }
    }
    (0.5 * sum).clamp(0.0, 1.0)
}

/// Relative frequencies of the observed values.
pub fn empirical_distribution<K: Ord, I: IntoIterator<Item = K>>(samples: I) -> BTreeMap<K, f64> {
    let mut counts: BTreeMap<K, u64> = BTreeMap::new();
    let mut n = 0u64;
    for s in samples {
        *counts.entry(s).or_default() += 1;
        n += 1;
    }
    counts.into_iter().map(|(k, c)| (k, c as f64 / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poisson_pmf;
    use crate::rng::stream;
    use rand_distr::{Distribution, Poisson};

    #[test]
    fn identical_and_disjoint() {
        let p: BTreeMap<u32, f64> = [(0, 0.3), (1, 0.7)].into();
        assert_eq!(tv_distance(&p, &p), 0.0);
        let a: BTreeMap<u32, f64> = [(0, 1.0)].into();
        let b: BTreeMap<u32, f64> = [(5, 1.0)].into();
        assert_eq!(tv_distance(&a, &b), 1.0);
    }

    #[test]
    fn empirical_poisson_is_close_to_source() {
        let d = Poisson::new(1.0).unwrap();
        let mut rng = stream(99);
        let emp = empirical_distribution((0..1_000_000).map(|_| (d.sample(&mut rng) as u64).min(20)));
        let mut src: BTreeMap<u64, f64> = (0..20).map(|j| (j, poisson_pmf(1.0, j))).collect();
        let tail = 1.0 - src.values().sum::<f64>();
        src.insert(20, tail);
        assert!(tv_distance(&emp, &src) < 0.003);
    }
}
