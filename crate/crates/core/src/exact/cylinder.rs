//! Cylinder probabilities `P(L_0 = k_0, ..., L_n = k_n)`: the event that the
//! ones of the sequence up to `K_n` sit exactly at the partial sums
//! `K_0 < K_1 < ... < K_n` of the gaps.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::special::ln_beta;
use crate::scalar::{Real, Scalar};
use crate::sequences::BernModel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderPattern {
    gaps: Vec<u64>,
}

impl CylinderPattern {
    /// Gaps `k_0, k_1, ..., k_n`, each at least 1.
    pub fn new(gaps: Vec<u64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(invalid("a cylinder pattern needs at least k_0"));
        }
        if gaps.contains(&0) {
            return Err(invalid("cylinder gaps must be positive"));
        }
        Ok(Self { gaps })
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    /// `K_0 = k_0, K_r = K_{r-1} + k_r`.
    pub fn partial_sums(&self) -> Vec<u64> {
        self.gaps
            .iter()
            .scan(0u64, |acc, &k| {
                *acc += k;
                Some(*acc)
            })
            .collect()
    }

    /// Number of gaps after the initial one (`n`).
    pub fn n(&self) -> usize {
        self.gaps.len() - 1
    }

    /// Bit string `Y_1, ..., Y_{K_n}` of the event.
    pub fn bits(&self) -> Vec<u8> {
        let sums = self.partial_sums();
        let mut bits = vec![0u8; *sums.last().expect("nonempty") as usize];
        for s in sums {
            bits[s as usize - 1] = 1;
        }
        bits
    }
}

/// `P(Y_n = 1)` under `Bern(a, b)` or `Bern1(a, b)`, in any scalar type.
pub fn marginal<T: Scalar>(model: BernModel, a: &T, b: &T, n: u64) -> T {
    assert!(n >= 1, "positions are 1-based");
    match model {
        BernModel::Bern => a.clone() / (a.clone() + b.clone() + T::from_u64(n - 1)),
        BernModel::Bern1 if n == 1 => T::one(),
        BernModel::Bern1 => a.clone() / (a.clone() + b.clone() + T::from_u64(n - 2)),
    }
}

/// Probability of observing exactly `bits` as `Y_1, ..., Y_len` under an
/// independent model: the product of marginals.
pub fn bit_pattern_prob<T: Scalar>(model: BernModel, a: &T, b: &T, bits: &[u8]) -> T {
    bits.iter().enumerate().fold(T::one(), |acc, (i, &bit)| {
        let p = marginal(model, a, b, i as u64 + 1);
        if bit == 1 {
            acc * p
        } else {
            acc * (T::one() - p)
        }
    })
}

fn check_ab<T: Real>(a: T, b: T) -> Result<()> {
    if !(a > T::zero()) || !(b >= T::zero()) {
        return Err(invalid(format!("need a > 0 and b >= 0, got ({a:?}, {b:?})")));
    }
    Ok(())
}

/// Sum of log marginals of the pattern's bits starting from position `from`.
fn ln_product<T: Real>(model: BernModel, a: T, b: T, bits: &[u8], from: usize) -> T {
    let mut acc = T::zero();
    for (i, &bit) in bits.iter().enumerate().skip(from - 1) {
        let n = i as u64 + 1;
        let shift = match model {
            BernModel::Bern => n - 1,
            BernModel::Bern1 => n - 2,
        };
        let denom = a + b + T::lit(shift as f64);
        acc = acc
            + if bit == 1 {
                (a / denom).ln()
            } else {
                // (b + shift) may be exactly zero: ln gives -inf and exp gives 0
                ((b + T::lit(shift as f64)) / denom).ln()
            };
    }
    acc
}

/// Product of `Bern(a, b)` marginals over the pattern, in log space.
pub fn cylinder_prob_product<T: Real>(a: T, b: T, pattern: &CylinderPattern) -> Result<T> {
    check_ab(a, b)?;
    Ok(ln_product(BernModel::Bern, a, b, &pattern.bits(), 1).exp())
}

/// Integral form of the cylinder probability under the Beta-mixed marked
/// Poisson model:
///
/// `B(b + K_n - 1, a + 1) / B(b, a) * a^n / prod_{s=0}^{n-1} (b + K_s - 1)`.
///
/// Requires `b > 0`.
pub fn cylinder_prob_integral<T: Real>(a: T, b: T, pattern: &CylinderPattern) -> Result<T> {
    check_ab(a, b)?;
    if !(b > T::zero()) {
        return Err(invalid("the integral form needs b > 0; use the product form for b = 0"));
    }
    let sums = pattern.partial_sums();
    let kn = T::lit(*sums.last().expect("nonempty") as f64);
    let n = pattern.n();
    let mut ln = ln_beta(b + kn - T::one(), a + T::one())? - ln_beta(b, a)? + a.ln() * T::lit(n as f64);
    for &ks in &sums[..n] {
        ln = ln - (b + T::lit(ks as f64) - T::one()).ln();
    }
    Ok(ln.exp())
}

/// Product of `Bern1(a, b)` marginals over a pattern with `k_0 = 1`.
pub fn cylinder_prob_bern1<T: Real>(a: T, b: T, pattern: &CylinderPattern) -> Result<T> {
    check_ab(a, b)?;
    if pattern.gaps()[0] != 1 {
        return Err(invalid("Bern1 starts with a one, so k_0 must be 1"));
    }
    Ok(ln_product(BernModel::Bern1, a, b, &pattern.bits(), 2).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::Rational;
    use proptest::prelude::*;

    fn pat(g: &[u64]) -> CylinderPattern {
        CylinderPattern::new(g.to_vec()).unwrap()
    }

    #[test]
    fn pattern_basics() {
        let p = pat(&[1, 2, 1]);
        assert_eq!(p.partial_sums(), vec![1, 3, 4]);
        assert_eq!(p.bits(), vec![1, 0, 1, 1]);
        assert!(CylinderPattern::new(vec![]).is_err());
        assert!(CylinderPattern::new(vec![1, 0]).is_err());
    }

    #[test]
    fn single_gap() {
        let (a, b) = (1.3f64, 0.6f64);
        let prod = cylinder_prob_product(a, b, &pat(&[1])).unwrap();
        let int = cylinder_prob_integral(a, b, &pat(&[1])).unwrap();
        assert!((prod - a / (a + b)).abs() < 1e-15);
        assert!((int - a / (a + b)).abs() < 1e-13);
    }

    #[test]
    fn hand_values() {
        let p11 = cylinder_prob_product(1.0f64, 1.0, &pat(&[1, 1])).unwrap();
        assert!((p11 - 1.0 / 6.0).abs() < 1e-15);
        let i11 = cylinder_prob_integral(1.0f64, 1.0, &pat(&[1, 1])).unwrap();
        assert!((i11 - 1.0 / 6.0).abs() < 1e-14);
        let b1 = |g: &[u64]| cylinder_prob_bern1(1.0f64, 2.0, &pat(g)).unwrap();
        assert_eq!(b1(&[1]), 1.0);
        assert!((b1(&[1, 1]) - 1.0 / 3.0).abs() < 1e-15);
        assert!((b1(&[1, 2]) - 1.0 / 6.0).abs() < 1e-15);
        assert!(cylinder_prob_bern1(1.0f64, 2.0, &pat(&[2, 1])).is_err());
        assert!(cylinder_prob_integral(1.0f64, 0.0, &pat(&[1])).is_err());
    }

    #[test]
    fn exact_rational_product() {
        let (a, b) = (ratio(1, 1), ratio(1, 1));
        let v: Rational = bit_pattern_prob(BernModel::Bern, &a, &b, &[1, 1]);
        assert_eq!(v, ratio(1, 6));
        let v: Rational = bit_pattern_prob(BernModel::Bern1, &ratio(1, 1), &ratio(2, 1), &[1, 0, 1]);
        assert_eq!(v, ratio(1, 6));
    }

    #[test]
    fn b_zero_is_limit_of_integral_form() {
        let p = pat(&[1, 3, 2, 1]);
        let exact = cylinder_prob_product(1.5f64, 0.0, &p).unwrap();
        let mut prev_err = f64::INFINITY;
        for b in [1e-2, 1e-4, 1e-6, 1e-8] {
            let err = (cylinder_prob_integral(1.5f64, b, &p).unwrap() - exact).abs();
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err < 1e-7);
        // b = 0 forces Y_1 = 1
        assert_eq!(cylinder_prob_product(1.5f64, 0.0, &pat(&[2, 1])).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn product_equals_integral(a in 0.05f64..8.0, b in 0.05f64..8.0, gaps in prop::collection::vec(1u64..12, 1..10)) {
            let p = CylinderPattern::new(gaps).unwrap();
            let prod = cylinder_prob_product(a, b, &p).unwrap();
            let int = cylinder_prob_integral(a, b, &p).unwrap();
            prop_assert!(((prod - int) / prod).abs() < 1e-10, "{prod} vs {int}");
        }

        #[test]
        fn log_space_matches_rational(gaps in prop::collection::vec(1u64..6, 1..5), an in 1i64..6, bn in 0i64..6) {
            let p = CylinderPattern::new(gaps).unwrap();
            let exact: Rational = bit_pattern_prob(BernModel::Bern, &ratio(an, 2), &ratio(bn, 3), &p.bits());
            let float = cylinder_prob_product(an as f64 / 2.0, bn as f64 / 3.0, &p).unwrap();
            let e = Scalar::to_f64(&exact);
            prop_assert!((float - e).abs() <= 1e-12 * e.max(1e-300));
        }
    }
}
