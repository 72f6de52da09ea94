//! Marginal laws of a single count `Z_k` under a Poisson mixture.

use crate::cmpp::{MixingLaw, MixtureSpec};
use crate::error::{invalid, Result};
use crate::exact::quadrature::beta_expectation;
use crate::exact::special::ln_gamma;
use crate::scalar::{Real, Scalar};

/// `Po(mean)` probability of `j`.
pub fn poisson_pmf<T: Real>(mean: T, j: u64) -> T {
    if mean <= T::zero() {
        return if j == 0 { T::one() } else { T::zero() };
    }
    let jf = T::lit(j as f64);
    (jf * mean.ln() - mean - ln_gamma(jf + T::one())).exp()
}

fn conditional_mean<T: Real>(a: T, k: u64, x: T, one_minus_x: T) -> T {
    let kf = T::lit(k as f64);
    // 1 - x^k = -expm1(k ln x), with ln x taken from 1 - x near the right end
    let ln_x = if x > T::lit(0.5) { (-one_minus_x).ln_1p() } else { x.ln() };
    a * -(kf * ln_x).exp_m1() / kf
}

/// `P(Z_k = j) = E[Po(a (1 - X_0^k) / k)(j)]` over the mixing law, by
/// Gauss–Legendre quadrature for Beta mixing and directly for a point mass.
pub fn mixture_pmf<T: Real>(mix: &MixtureSpec<T>, k: u64, j: u64) -> Result<T> {
    if k == 0 {
        return Err(invalid("string order must be at least 1"));
    }
    mix.mixing.validate()?;
    match &mix.mixing {
        MixingLaw::PointMass(x) => Ok(poisson_pmf(mix.intensity_of(k, *x), j)),
        MixingLaw::Beta { alpha, beta } => beta_expectation(*alpha, *beta, |x, omx| {
            poisson_pmf(conditional_mean(mix.a, k, x, omx), j)
        }),
    }
}

/// `E[X^n]` for the mixing law.
fn raw_moment<T: Scalar>(mixing: &MixingLaw<T>, n: u64) -> T {
    match mixing {
        MixingLaw::PointMass(x) => (0..n).fold(T::one(), |acc, _| acc * x.clone()),
        MixingLaw::Beta { alpha, beta } => (0..n).fold(T::one(), |acc, j| {
            let j = T::from_u64(j);
            acc * (alpha.clone() + j.clone()) / (alpha.clone() + beta.clone() + j)
        }),
    }
}

/// Mean and variance of `Z_k`:
/// `mean = a (1 - E[X^k]) / k`, `variance = mean + a^2 Var(X^k) / k^2`.
pub fn mixture_moments<T: Scalar>(mix: &MixtureSpec<T>, k: u64) -> Result<(T, T)> {
    if k == 0 {
        return Err(invalid("string order must be at least 1"));
    }
    mix.mixing.validate()?;
    let kf = T::from_u64(k);
    let ek = raw_moment(&mix.mixing, k);
    let e2k = raw_moment(&mix.mixing, 2 * k);
    let mean = mix.a.clone() * (T::one() - ek.clone()) / kf.clone();
    let var_xk = e2k - ek.clone() * ek;
    let variance = mean.clone() + mix.a.clone() * mix.a.clone() * var_xk / (kf.clone() * kf);
    Ok((mean, variance))
}
