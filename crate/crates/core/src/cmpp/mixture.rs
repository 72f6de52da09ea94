use rand::Rng;
use rand_distr::{Beta, Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::sequences::{add_unit, BernSequence, CountVector};

/// Law of the initial value `X_0` that mixes the Poisson factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingLaw<T = f64> {
    Beta { alpha: T, beta: T },
    /// Degenerate `X_0 = x`; `x = 0` is the limit of vanishing Beta shape.
    PointMass(T),
}

impl<T: Scalar> MixingLaw<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            MixingLaw::Beta { alpha, beta } => {
                if !(*alpha > T::zero()) || !(*beta > T::zero()) {
                    return Err(invalid(format!(
                        "Beta mixing needs positive parameters, got ({alpha:?}, {beta:?}); \
                         use an explicit point mass for the degenerate limit"
                    )));
                }
            }
            MixingLaw::PointMass(x) => {
                if *x < T::zero() || *x > T::one() {
                    return Err(invalid(format!("point mass {x:?} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }
}

/// Mixture of independent Poisson factors: given `X_0 = x`, the counts are
/// independent with `Z_k ~ Po(a (1 - x^k) / k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec<T = f64> {
    pub a: T,
    pub mixing: MixingLaw<T>,
}

impl<T: Scalar> MixtureSpec<T> {
    pub fn new(a: T, mixing: MixingLaw<T>) -> Result<Self> {
        if !(a > T::zero()) {
            return Err(invalid(format!("a must be positive, got {a:?}")));
        }
        mixing.validate()?;
        Ok(Self { a, mixing })
    }

    /// Count law of `Bern(a, b)`: Beta(b, a) mixing, point mass at 0 when `b = 0`.
    pub fn bern(a: T, b: T) -> Result<Self> {
        if b < T::zero() {
            return Err(invalid("b must be nonnegative"));
        }
        let mixing = if b == T::zero() {
            MixingLaw::PointMass(T::zero())
        } else {
            MixingLaw::Beta { alpha: b, beta: a.clone() }
        };
        Self::new(a, mixing)
    }

    /// Count law of `Bern1(a, b)` for `b >= 1`: Beta(b - 1, a + 1) mixing,
    /// point mass at 0 when `b = 1`. There is no such law for `b < 1`.
    pub fn bern1(a: T, b: T) -> Result<Self> {
        if b < T::one() {
            return Err(invalid(
                "Bern1(a, b) counts are not a Poisson mixture for b < 1; use the recurrence sampler",
            ));
        }
        let mixing = if b == T::one() {
            MixingLaw::PointMass(T::zero())
        } else {
            MixingLaw::Beta {
                alpha: b - T::one(),
                beta: a.clone() + T::one(),
            }
        };
        Self::new(a, mixing)
    }

    /// Conditional mean `a (1 - x0^k) / k` of `Z_k` given `X_0 = x0`.
    pub fn intensity_of(&self, k: u64, x0: T) -> T {
        let mut pow = T::one();
        for _ in 0..k {
            pow = pow * x0.clone();
        }
        self.a.clone() * (T::one() - pow) / T::from_u64(k)
    }
}

/// Conditional mean `a (1 - x^k) / k` in `f64` without cancellation near `x = 1`.
pub(crate) fn poisson_mean(a: f64, k: u64, x: f64) -> f64 {
    if x <= 0.0 {
        return a / k as f64;
    }
    a * -(k as f64 * x.ln()).exp_m1() / k as f64
}

fn draw_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("finite positive Poisson mean");
    dist.sample(rng) as u64
}

fn draw_x0<R: Rng + ?Sized>(mixing: &MixingLaw<f64>, rng: &mut R) -> Result<f64> {
    Ok(match *mixing {
        MixingLaw::PointMass(x) => x,
        MixingLaw::Beta { alpha, beta } => Beta::new(alpha, beta)
            .map_err(|e| invalid(format!("Beta({alpha}, {beta}): {e}")))?
            .sample(rng),
    })
}

/// Draws `X_0` from the mixing law and then independent
/// `Z_k ~ Po(a (1 - X_0^k) / k)` for `k <= dmax`. Orders above `dmax` are not
/// sampled (their total is infinite), so the overflow bucket stays empty.
pub fn sample_mixture_counts<R: Rng + ?Sized>(
    mix: &MixtureSpec<f64>,
    dmax: usize,
    rng: &mut R,
) -> Result<CountVector> {
    mix.validate_f64()?;
    let x0 = draw_x0(&mix.mixing, rng)?;
    sample_conditional_counts(mix.a, x0, dmax, rng)
}

/// Independent `Z_k ~ Po(a (1 - x0^k) / k)` for a fixed `x0`.
pub fn sample_conditional_counts<R: Rng + ?Sized>(
    a: f64,
    x0: f64,
    dmax: usize,
    rng: &mut R,
) -> Result<CountVector> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(invalid(format!("x0 = {x0} outside [0, 1]")));
    }
    let counts = (1..=dmax as u64)
        .map(|k| draw_poisson(poisson_mean(a, k, x0), rng))
        .collect();
    CountVector::from_counts(counts, 0)
}

impl MixtureSpec<f64> {
    fn validate_f64(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(invalid("a must be positive"));
        }
        self.mixing.validate()
    }
}

/// Counts of `Bern1(a, b)` for any `b >= 0` through the decomposition on the
/// position `n` of the second one:
///
/// `L(Z(a, b)) = sum_{n >= 2} p_n L(Z(a, b + n - 1) + W_{n-1})`,
///
/// where `Z(a, b + n - 1)` is the mixture with Beta(b + n - 2, a + 1) mixing
/// (a point mass at 0 when `b + n - 2 = 0`).
pub fn sample_bern1_counts_recurrence<R: Rng + ?Sized>(
    a: f64,
    b: f64,
    dmax: usize,
    rng: &mut R,
) -> Result<CountVector> {
    let seq = BernSequence::bern1(a, b)?;
    if dmax == 0 {
        return Err(invalid("dmax must be at least 1"));
    }
    // the second one of Bern1 is the first one after position 1
    let n = seq
        .next_one(1, u64::MAX / 4, rng)
        .ok_or_else(|| invalid("second one beyond representable range"))?;
    let shifted_b = b + (n - 1) as f64;
    let mix = MixtureSpec::bern1(a, shifted_b)?;
    let z = sample_mixture_counts(&mix, dmax, rng)?;
    add_unit(&z, n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{child_stream, stream};
    use crate::scalar::ratio;

    #[test]
    fn intensity_endpoints_and_monotone() {
        let m = MixtureSpec::new(2.5f64, MixingLaw::PointMass(0.0)).unwrap();
        for k in 1..10 {
            assert_eq!(m.intensity_of(k, 0.0), 2.5 / k as f64);
            assert_eq!(m.intensity_of(k, 1.0), 0.0);
            let mut prev = f64::INFINITY;
            for i in 0..=20 {
                let v = m.intensity_of(k, i as f64 / 20.0);
                assert!(v <= prev);
                prev = v;
                assert!((poisson_mean(2.5, k, i as f64 / 20.0) - v).abs() < 1e-14);
            }
        }
        let q = MixtureSpec::new(ratio(1, 1), MixingLaw::PointMass(ratio(1, 2))).unwrap();
        assert_eq!(q.intensity_of(2, ratio(1, 2)), ratio(3, 8));
    }

    #[test]
    fn constructors() {
        assert_eq!(MixtureSpec::bern(1.0, 0.0).unwrap().mixing, MixingLaw::PointMass(0.0));
        assert_eq!(
            MixtureSpec::bern(2.0, 3.0).unwrap().mixing,
            MixingLaw::Beta { alpha: 3.0, beta: 2.0 }
        );
        assert_eq!(MixtureSpec::bern1(2.0, 1.0).unwrap().mixing, MixingLaw::PointMass(0.0));
        assert_eq!(
            MixtureSpec::bern1(2.0, 3.0).unwrap().mixing,
            MixingLaw::Beta { alpha: 2.0, beta: 3.0 }
        );
        assert!(MixtureSpec::bern1(2.0, 0.5).is_err());
        assert!(MixtureSpec::new(1.0, MixingLaw::Beta { alpha: 0.0, beta: 1.0 }).is_err());
        assert!(MixtureSpec::new(0.0, MixingLaw::PointMass(0.0)).is_err());
        assert!(MixtureSpec::new(1.0, MixingLaw::PointMass(1.5)).is_err());
    }

    #[test]
    fn degenerate_x0_one_gives_zero_counts() {
        let m = MixtureSpec::new(3.0, MixingLaw::PointMass(1.0)).unwrap();
        for s in 0..100 {
            let z = sample_mixture_counts(&m, 8, &mut child_stream(1, s)).unwrap();
            assert_eq!(z.total(), 0);
        }
    }

    #[test]
    fn uniform_mixing_zero_probability() {
        // a = 1, Beta(1, 1): P(Z_1 = 0) = int_0^1 exp(-(1 - x)) dx = 1 - 1/e
        let m = MixtureSpec::new(1.0, MixingLaw::Beta { alpha: 1.0, beta: 1.0 }).unwrap();
        let reps = 400_000u64;
        let mut rng = stream(31);
        let zeros = (0..reps)
            .filter(|_| sample_mixture_counts(&m, 1, &mut rng).unwrap().get(1) == 0)
            .count() as f64;
        let p = 1.0 - (-1.0f64).exp();
        let sigma = (p * (1.0 - p) / reps as f64).sqrt();
        assert!((zeros / reps as f64 - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn point_mass_zero_gives_poisson_a_over_k() {
        let m = MixtureSpec::bern(2.0, 0.0).unwrap();
        let reps = 200_000u64;
        let mut rng = stream(5);
        let mut sums = [0.0f64; 4];
        for _ in 0..reps {
            let z = sample_mixture_counts(&m, 4, &mut rng).unwrap();
            for k in 1..=4 {
                sums[k - 1] += z.get(k) as f64;
            }
        }
        for k in 1..=4 {
            let mean = 2.0 / k as f64;
            let sigma = (mean / reps as f64).sqrt();
            assert!((sums[k - 1] / reps as f64 - mean).abs() < 4.0 * sigma, "k={k}");
        }
    }

    #[test]
    fn recurrence_with_b_zero_adds_one_string() {
        // b = 0: the second one is at position 2, so Z = Z(a, 1) + W_1 with Z_1 >= 1
        for s in 0..2000 {
            let z = sample_bern1_counts_recurrence(1.5, 0.0, 6, &mut child_stream(4, s)).unwrap();
            assert!(z.get(1) >= 1);
        }
        let reps = 200_000u64;
        let mean: f64 = (0..reps)
            .map(|s| sample_bern1_counts_recurrence(1.5, 0.0, 6, &mut child_stream(6, s)).unwrap().get(1) as f64)
            .sum::<f64>()
            / reps as f64;
        // E Z_1 = 1 + a for Z(a, 1) ~ prod Po(a / k)
        let sigma = (1.5f64 / reps as f64).sqrt();
        assert!((mean - 2.5).abs() < 4.0 * sigma, "mean {mean}");
    }

    #[test]
    fn recurrence_rejects_bad_parameters() {
        let mut rng = stream(0);
        assert!(sample_bern1_counts_recurrence(0.0, 1.0, 4, &mut rng).is_err());
        assert!(sample_bern1_counts_recurrence(1.0, -1.0, 4, &mut rng).is_err());
        assert!(sample_bern1_counts_recurrence(1.0, 1.0, 0, &mut rng).is_err());
    }
}
