//! Regularized incomplete gamma function and the chi-square tail.

use crate::error::{invalid, Result};
use crate::exact::ln_gamma;

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-15;
const TINY: f64 = 1e-300;

/// `P(s, x)` by its power series; converges fast for `x < s + 1`.
fn lower_series(s: f64, x: f64) -> f64 {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut denom = s;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (s * x.ln() - x - ln_gamma(s)).exp() * sum
}

/// `Q(s, x)` by the Lentz continued fraction; converges fast for `x >= s + 1`.
fn upper_fraction(s: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (s * x.ln() - x - ln_gamma(s)).exp() * h
}

fn check(s: f64, x: f64) -> Result<()> {
    if !(s > 0.0) || !(x >= 0.0) || !s.is_finite() {
        return Err(invalid(format!("incomplete gamma needs s > 0, x >= 0, got s={s}, x={x}")));
    }
    Ok(())
}

/// Regularized lower incomplete gamma `P(s, x)`.
pub fn gamma_p(s: f64, x: f64) -> Result<f64> {
    check(s, x)?;
    Ok(if x == 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else if x < s + 1.0 {
        lower_series(s, x)
    } else {
        1.0 - upper_fraction(s, x)
    })
}

/// Regularized upper incomplete gamma `Q(s, x) = 1 - P(s, x)`.
pub fn gamma_q(s: f64, x: f64) -> Result<f64> {
    check(s, x)?;
    Ok(if x == 0.0 {
        1.0
    } else if x.is_infinite() {
        0.0
    } else if x < s + 1.0 {
        1.0 - lower_series(s, x)
    } else {
        upper_fraction(s, x)
    })
}

/// Upper tail `P(χ²_dof > x) = Q(dof / 2, x / 2)`.
pub fn chi2_sf(x: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(invalid("chi-square needs at least one degree of freedom"));
    }
    Ok(gamma_q(dof as f64 / 2.0, x.max(0.0) / 2.0)?.clamp(0.0, 1.0))
}

/// `P(χ²_dof <= x)`.
pub fn chi2_cdf(x: f64, dof: usize) -> Result<f64> {
    Ok(1.0 - chi2_sf(x, dof)?)
}
