use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::special::ln_gamma_ratio;
use crate::scalar::Scalar;
use crate::sequences::BernModel;

/// `p_n`: probability that the second one of `Bern1(a, b)` is at position `n >= 2`.
///
/// `p_2 = a / (a + b)`, `p_n = a / (a + b + n - 2) * prod_{r=0}^{n-3} (b + r) / (a + b + r)`.
pub fn second_success_pmf<T: Scalar>(a: &T, b: &T, n: u64) -> Result<T> {
    if n < 2 {
        return Err(invalid("the second one cannot occur before position 2"));
    }
    let ab = a.clone() + b.clone();
    let mut p = a.clone() / (ab.clone() + T::from_u64(n - 2));
    for r in 0..n.saturating_sub(2) {
        let r = T::from_u64(r);
        p = p * (b.clone() + r.clone()) / (ab.clone() + r);
    }
    Ok(p)
}

/// `ln P(second one of Bern1(a, b) is after position m)` for `m >= 1`:
/// `ln prod_{r=0}^{m-2} (b + r) / (a + b + r)`. `-inf` when `b = 0` and `m >= 2`.
pub fn second_success_ln_survival(a: f64, b: f64, m: u64) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    if b == 0.0 {
        return f64::NEG_INFINITY;
    }
    let k = (m - 1) as f64;
    ln_gamma_ratio(b, a) - ln_gamma_ratio(b + k, a)
}

/// Moments of `Z_1`, the count of adjacent pairs of ones in `Bern1(a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Z1Moments<T> {
    /// `E Z_1 = a (a + 1) / (a + b)`.
    pub mean: T,
    /// `E Z_1^2 = a (a + 1) / (a + b) + a^2 (a + 1)(a + 2) / ((a + b)(a + b + 1))`.
    pub second_moment: T,
    pub variance: T,
    /// `Var Z_1 - E Z_1`.
    pub overdispersion: T,
}

/// Overdispersion `Var Z_1 - E Z_1 = a^2 (a + 1)(b - 1) / ((a + b)^2 (a + b + 1))`
/// of the 1-string count in `Bern1(a, b)`. Negative for `b < 1`, which rules
/// out any Poisson mixture.
pub fn overdispersion_z1<T: Scalar>(a: &T, b: &T) -> T {
    let one = T::one();
    let ab = a.clone() + b.clone();
    a.clone() * a.clone() * (a.clone() + one.clone()) * (b.clone() - one.clone())
        / (ab.clone() * ab.clone() * (ab + one))
}

/// Mean, second moment, variance and overdispersion of `Z_1` under `Bern1(a, b)`.
pub fn z1_moments<T: Scalar>(a: &T, b: &T) -> Z1Moments<T> {
    let one = T::one();
    let two = T::from_i64(2);
    let ab = a.clone() + b.clone();
    let mean = a.clone() * (a.clone() + one.clone()) / ab.clone();
    let second_moment = mean.clone()
        + a.clone() * a.clone() * (a.clone() + one.clone()) * (a.clone() + two)
            / (ab.clone() * (ab + one));
    let variance = second_moment.clone() - mean.clone() * mean.clone();
    let overdispersion = variance.clone() - mean.clone();
    Z1Moments {
        mean,
        second_moment,
        variance,
        overdispersion,
    }
}

/// Probabilities of the first two bits when the initial mark has law
/// `r+(x, k) = k x^(k-1) (1 - x)^2` and everything else is the `Bern(a, b)` model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlusProbs<T> {
    /// `P+(Y_1 = 1) = a (a + 1) / ((a + b)(a + b + 1))`.
    pub y1: T,
    /// `P+(Y_2 = 1) = (a^2 (a + 2) + 2ab (a + 1)) / ((a + b)(a + b + 1)(a + b + 2))`.
    pub y2: T,
    /// `P+(Y_1 = 1, Y_2 = 1) = a^2 (a + 2) / ((a + b)(a + b + 1)(a + b + 2))`.
    pub joint: T,
    /// `P+(Y_1 = 1) P+(Y_2 = 1)`.
    pub product: T,
    /// `product - joint`; nonzero, so the bits are dependent.
    pub gap: T,
}

pub fn plus_model_probs<T: Scalar>(a: &T, b: &T) -> Result<PlusProbs<T>> {
    if !(*a > T::zero()) || !(*b > T::zero()) {
        return Err(invalid("the r+ model needs a > 0 and b > 0"));
    }
    let one = T::one();
    let two = T::from_i64(2);
    let ab = a.clone() + b.clone();
    let d2 = ab.clone() * (ab.clone() + one.clone());
    let d3 = d2.clone() * (ab + two.clone());
    let y1 = a.clone() * (a.clone() + one.clone()) / d2;
    let joint = a.clone() * a.clone() * (a.clone() + two.clone()) / d3.clone();
    let y2 = (a.clone() * a.clone() * (a.clone() + two.clone())
        + two * b.clone() * a.clone() * (a.clone() + one))
        / d3;
    let product = y1.clone() * y2.clone();
    let gap = product.clone() - joint.clone();
    Ok(PlusProbs {
        y1,
        y2,
        joint,
        product,
        gap,
    })
}

/// Bit probabilities of the model that exchanges the first two marked
/// points of the `Bern(1, 0)` record construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwappedProbs<T> {
    /// `P'(Y_2 = 1) = 1/4`.
    pub y2: T,
    /// `P'(Y_2 = 1, Y_3 = 1) = 1/6`.
    pub y2_and_y3: T,
    /// `P'(Y_2 = 0, Y_3 = 1) = 5/36`.
    pub y2_zero_y3_one: T,
    /// `P'(Y_3 = 1) = 11/36`.
    pub y3: T,
    /// `P'(Y_2 = 1) P'(Y_3 = 1) = 11/144`.
    pub product: T,
}

pub fn swapped_model_probs<T: Scalar>() -> SwappedProbs<T> {
    let frac = |n: i64, d: i64| T::from_i64(n) / T::from_i64(d);
    let y2 = frac(1, 4);
    let y2_and_y3 = frac(1, 6);
    let y2_zero_y3_one = frac(5, 36);
    let y3 = y2_and_y3.clone() + y2_zero_y3_one.clone();
    let product = y2.clone() * y3.clone();
    SwappedProbs {
        y2,
        y2_and_y3,
        y2_zero_y3_one,
        y3,
        product,
    }
}

/// Upper bound on the expected number of strings of order `<= dmax` missed
/// by counting only inside a length-`horizon` prefix:
///
/// `sum_{d <= dmax} sum_{n > horizon - d} P(Y_n = 1) P(Y_{n+d} = 1)`.
///
/// With `P(Y_n = 1) = a / (a + c + n)` the inner sum telescopes to
/// `(a^2 / d) sum_{n = horizon-d+1}^{horizon} 1 / (a + c + n)`.
pub fn truncation_bias_bound(model: BernModel, a: f64, b: f64, dmax: usize, horizon: u64) -> Result<f64> {
    if !(a > 0.0) || !(b >= 0.0) {
        return Err(invalid("need a > 0 and b >= 0"));
    }
    if dmax == 0 || horizon <= dmax as u64 {
        return Err(invalid(format!("horizon {horizon} must exceed dmax {dmax}")));
    }
    let c = match model {
        BernModel::Bern => b - 1.0,
        BernModel::Bern1 => b - 2.0,
    };
    let mut total = 0.0;
    for d in 1..=dmax as u64 {
        let tail: f64 = (horizon - d + 1..=horizon).map(|n| 1.0 / (a + c + n as f64)).sum();
        total += a * a * tail / d as f64;
    }
    Ok(total)
}

/// Smallest horizon whose [`truncation_bias_bound`] is at most `target`.
pub fn horizon_for_bias(model: BernModel, a: f64, b: f64, dmax: usize, target: f64) -> Result<u64> {
    if !(target > 0.0) {
        return Err(invalid("target bias must be positive"));
    }
    let bound = |n: u64| truncation_bias_bound(model, a, b, dmax, n);
    let mut lo = dmax as u64;
    let mut hi = lo + 1;
    while bound(hi)? > target {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| invalid("target bias unreachable"))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
