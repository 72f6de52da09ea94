//! Log-gamma and Beta function.

use crate::error::{invalid, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the Gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection keeps accuracy near the pole at zero
        let pi = T::lit(std::f64::consts::PI);
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::lit(i as f64));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    T::lit(0.5 * (2.0 * std::f64::consts::PI).ln()) + (x + half) * t.ln() - t + acc.ln()
}

/// `ln B(alpha, beta)`.
pub fn ln_beta<T: Real>(alpha: T, beta: T) -> Result<T> {
    if !(alpha > T::zero()) || !(beta > T::zero()) {
        return Err(invalid(format!(
            "Beta function needs positive arguments, got ({alpha:?}, {beta:?})"
        )));
    }
    Ok(ln_gamma(alpha) + ln_gamma(beta) - ln_gamma(alpha + beta))
}

/// `B(alpha, beta) = Γ(alpha)Γ(beta)/Γ(alpha + beta)`, computed in log space.
pub fn beta_fn<T: Real>(alpha: T, beta: T) -> Result<T> {
    ln_beta(alpha, beta).map(T::exp)
}

/// Below this argument `ln Γ` differences are taken directly.
const RATIO_ASYMPTOTIC_FROM: f64 = 1e3;

fn stirling_tail<T: Real>(z: T) -> T {
    let z2 = z * z;
    T::one() / (T::lit(12.0) * z) - T::one() / (T::lit(360.0) * z * z2)
        + T::one() / (T::lit(1260.0) * z * z2 * z2)
}

/// `ln Γ(x + a) - ln Γ(x)` without cancellation for large `x`, where the
/// Stirling series gives `(x - 1/2) ln(1 + a/x) + a ln(x + a) - a` plus
/// correction terms.
pub fn ln_gamma_ratio<T: Real>(x: T, a: T) -> T {
    let big = T::lit(RATIO_ASYMPTOTIC_FROM);
    if x < big || x + a < big {
        return ln_gamma(x + a) - ln_gamma(x);
    }
    let half = T::lit(0.5);
    (x - half) * (a / x).ln_1p() + a * (x + a).ln() - a + stirling_tail(x + a) - stirling_tail(x)
}

/// Log of the rising factorial `x (x + 1) ... (x + n - 1)` for `x > 0`.
pub fn ln_rising<T: Real>(x: T, n: u64) -> T {
    ln_gamma_ratio(x, T::lit(n as f64))
}
