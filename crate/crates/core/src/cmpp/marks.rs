use std::fmt::Debug;
use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::error::{invalid, Result};

/// User-supplied mark law for custom models.
pub trait MarkSampler: Send + Sync + Debug {
    fn pmf(&self, x: f64, k: u64) -> f64;
    fn sample(&self, x: f64, rng: &mut dyn RngCore) -> u64;
}

/// Mark law `k -> p(x, k)` on `{1, 2, ...}` indexed by a location `x` in `[0, 1)`.
#[derive(Debug, Clone)]
pub enum MarkLaw {
    /// `x^(k-1) (1 - x)`: geometric with success probability `1 - x`.
    Geometric,
    /// `k x^(k-1) (1 - x)^2`: sum of two such geometrics minus one.
    SumOfTwoGeometrics,
    /// Always 1.
    One,
    Custom(Arc<dyn MarkSampler>),
}

impl MarkLaw {
    pub fn pmf(&self, x: f64, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let km1 = (k - 1) as f64;
        match self {
            MarkLaw::Geometric => x.powf(km1) * (1.0 - x),
            MarkLaw::SumOfTwoGeometrics => k as f64 * x.powf(km1) * (1.0 - x) * (1.0 - x),
            MarkLaw::One => f64::from(u8::from(k == 1)),
            MarkLaw::Custom(c) => c.pmf(x, k),
        }
    }

    /// Draws a mark at location `x`; `one_minus_x` carries `1 - x` at full
    /// precision for points close to 1.
    pub(crate) fn sample_at<R: Rng>(&self, x: f64, one_minus_x: f64, rng: &mut R) -> u64 {
        match self {
            MarkLaw::Geometric => geometric(one_minus_x, rng),
            MarkLaw::SumOfTwoGeometrics => geometric(one_minus_x, rng) + geometric(one_minus_x, rng) - 1,
            MarkLaw::One => 1,
            MarkLaw::Custom(c) => c.sample(x, rng),
        }
    }
}

/// Marks beyond this are clamped; they only ever land in overflow buckets.
const MARK_CAP: u64 = u64::MAX / 4;

/// Geometric on `{1, 2, ...}` with success probability `p`, by inversion:
/// `1 + floor(ln U / ln(1 - p))`.
pub(crate) fn geometric<R: Rng + ?Sized>(p: f64, rng: &mut R) -> u64 {
    if p >= 1.0 {
        return 1;
    }
    let u = 1.0 - rng.random::<f64>();
    let k = (u.ln() / (-p).ln_1p()).floor();
    if k >= MARK_CAP as f64 {
        MARK_CAP
    } else {
        1 + k as u64
    }
}

fn check_location(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(invalid(format!("mark location must lie in (0, 1), got {x}")));
    }
    Ok(())
}

/// Mark with pmf `x^(k-1) (1 - x)`.
pub fn sample_mark_q<R: Rng + ?Sized>(x: f64, rng: &mut R) -> Result<u64> {
    check_location(x)?;
    Ok(geometric(1.0 - x, rng))
}

/// Mark with pmf `k x^(k-1) (1 - x)^2`, as `G_1 + G_2 - 1`.
pub fn sample_mark_rplus<R: Rng + ?Sized>(x: f64, rng: &mut R) -> Result<u64> {
    check_location(x)?;
    Ok(geometric(1.0 - x, rng) + geometric(1.0 - x, rng) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn pmf_at_one() {
        let x = 0.3;
        assert!((MarkLaw::Geometric.pmf(x, 1) - 0.7).abs() < 1e-15);
        assert!((MarkLaw::SumOfTwoGeometrics.pmf(x, 1) - 0.49).abs() < 1e-15);
        assert_eq!(MarkLaw::One.pmf(x, 1), 1.0);
        assert_eq!(MarkLaw::One.pmf(x, 2), 0.0);
    }

    #[test]
    fn rplus_is_convolution_of_geometrics() {
        // P(G1 + G2 - 1 = k) = sum_{i=1}^{k} q(i) q(k + 1 - i)
        for &x in &[0.1, 0.5, 0.93] {
            for k in 1..40u64 {
                let conv: f64 = (1..=k)
                    .map(|i| MarkLaw::Geometric.pmf(x, i) * MarkLaw::Geometric.pmf(x, k + 1 - i))
                    .sum();
                let direct = MarkLaw::SumOfTwoGeometrics.pmf(x, k);
                assert!((conv - direct).abs() < 1e-15, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn geometric_mean_at_half() {
        let draws = 1_000_000u64;
        let mut rng = stream(17);
        let total: u64 = (0..draws).map(|_| sample_mark_q(0.5, &mut rng).unwrap()).sum();
        let mean = total as f64 / draws as f64;
        // variance x / (1 - x)^2 = 2
        let sigma = (2.0 / draws as f64).sqrt();
        assert!((mean - 2.0).abs() < 4.0 * sigma, "mean {mean}");
    }

    #[test]
    fn rplus_pmf_at_half() {
        let draws = 1_000_000u64;
        let mut rng = stream(23);
        let mut hits = [0u64; 3];
        for _ in 0..draws {
            let k = sample_mark_rplus(0.5, &mut rng).unwrap();
            if k <= 3 {
                hits[k as usize - 1] += 1;
            }
        }
        for (i, &p) in [0.25, 0.25, 3.0 / 16.0].iter().enumerate() {
            let freq = hits[i] as f64 / draws as f64;
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((freq - p).abs() < 4.0 * sigma, "k={} freq {freq}", i + 1);
        }
    }

    #[test]
    fn thinned_means_are_a_over_k() {
        // int_0^1 [a / (1 - x)] x^(k-1) (1 - x) dx = a / k
        let a = 1.0f64;
        for k in 1..=8u64 {
            let v = crate::exact::quadrature::integrate(
                |x: f64| a / (1.0 - x) * MarkLaw::Geometric.pmf(x, k),
                0.0,
                1.0,
            )
            .unwrap();
            assert!((v - a / k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let mut rng = stream(0);
        for x in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            assert!(sample_mark_q(x, &mut rng).is_err());
            assert!(sample_mark_rplus(x, &mut rng).is_err());
        }
    }
}
