//! Gauss–Legendre quadrature with node doubling, and Beta expectations.
//!
//! Beta densities with a parameter below one are unbounded at an endpoint,
//! and non-integer parameters leave fractional powers that slow convergence.
//! [`beta_expectation`] splits `(0, 1)` at one half and substitutes
//! `x = t^q` on the left piece and `1 - x = s^q` on the right, with an
//! integer `q` that turns `x^(alpha-1) dx` into `q t^(q alpha - 1) dt`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact::special::ln_beta;
use crate::scalar::{Real, Scalar};

/// Node counts tried in order; convergence is declared when two successive
/// estimates agree.
pub const NODE_SCHEDULE: [usize; 4] = [64, 128, 256, 512];

/// Absolute agreement demanded between successive estimates.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                deriv = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            if dp != 0.0 {
                deriv = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Cached rule for one of the [`NODE_SCHEDULE`] sizes.
    pub fn cached(n: usize) -> &'static GaussLegendre {
        static RULES: [OnceLock<GaussLegendre>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let idx = NODE_SCHEDULE
            .iter()
            .position(|&m| m == n)
            .expect("rule size must be in NODE_SCHEDULE");
        RULES[idx].get_or_init(|| GaussLegendre::new(n))
    }

    /// Applies the rule on `[lo, hi]`.
    pub fn integrate<T: Real, F: Fn(T) -> T>(&self, f: &F, lo: T, hi: T) -> T {
        let half = T::lit(0.5) * (hi - lo);
        let mid = T::lit(0.5) * (hi + lo);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + T::lit(w) * f(mid + half * T::lit(x));
        }
        acc * half
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn tolerance<T: Real>() -> T {
    T::lit(QUADRATURE_TOL).max(T::epsilon() * T::lit(256.0))
}

/// Integrates `f` over `[lo, hi]` doubling nodes from 64 until two successive
/// estimates agree to [`QUADRATURE_TOL`].
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T) -> Result<T> {
    integrate_pieces(&[(&f as &dyn Fn(T) -> T, lo, hi)])
}

fn integrate_pieces<T: Real>(pieces: &[(&dyn Fn(T) -> T, T, T)]) -> Result<T> {
    let eval = |n: usize| {
        let rule = GaussLegendre::cached(n);
        pieces
            .iter()
            .fold(T::zero(), |acc, (f, lo, hi)| acc + rule.integrate(f, *lo, *hi))
    };
    let tol = tolerance::<T>();
    let mut previous = eval(NODE_SCHEDULE[0]);
    let mut current = previous;
    for (i, &n) in NODE_SCHEDULE.iter().enumerate().skip(1) {
        if i > 1 {
            previous = current;
        }
        current = eval(n);
        if (current - previous).abs() <= tol {
            return Ok(current);
        }
    }
    Err(Error::QuadratureNonConvergence {
        previous: Scalar::to_f64(&previous),
        current: Scalar::to_f64(&current),
        tolerance: Scalar::to_f64(&tol),
    })
}

/// Integer power `q` for the substitution `x = t^q`: the Beta weight becomes
/// `q t^(q alpha - 1)`, which is smooth enough for Gauss–Legendre once the
/// exponent is an integer or at least 2.
fn power_for<T: Real>(alpha: T) -> T {
    if alpha.fract() == T::zero() {
        T::one()
    } else {
        (T::lit(3.0) / alpha).ceil().max(T::one())
    }
}

/// `E[f(X)]` for `X ~ Beta(alpha, beta)`. `f` receives both `x` and `1 - x`
/// so callers keep precision near the right endpoint.
pub fn beta_expectation<T: Real, F: Fn(T, T) -> T>(alpha: T, beta: T, f: F) -> Result<T> {
    let ln_b = ln_beta(alpha, beta)?;
    let half = T::lit(0.5);
    let one = T::one();
    let (qa, qb) = (power_for(alpha), power_for(beta));
    let left = |t: T| {
        let x = t.powf(qa);
        let omx = one - x;
        (qa.ln() + (qa * alpha - one) * t.ln() + (beta - one) * omx.ln() - ln_b).exp() * f(x, omx)
    };
    let right = |s: T| {
        let omx = s.powf(qb);
        let x = one - omx;
        (qb.ln() + (qb * beta - one) * s.ln() + (alpha - one) * x.ln() - ln_b).exp() * f(x, omx)
    };
    integrate_pieces(&[
        (&left, T::zero(), half.powf(one / qa)),
        (&right, T::zero(), half.powf(one / qb)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for &n in &NODE_SCHEDULE {
            let rule = GaussLegendre::cached(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-12, "n={n}");
            for i in 0..n {
                assert!((rule.nodes[i] + rule.nodes[n - 1 - i]).abs() < 1e-14);
            }
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn polynomials_integrate_exactly() {
        let v = integrate(|x: f64| x.powi(7) - 3.0 * x * x, 0.0, 2.0).unwrap();
        assert!((v - (2f64.powi(8) / 8.0 - 8.0)).abs() < 1e-11);
    }

    #[test]
    fn exponential_integral() {
        let v = integrate(|x: f64| (-(1.0 - x)).exp(), 0.0, 1.0).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        let v32 = integrate(|x: f32| (-(1.0 - x)).exp(), 0.0, 1.0).unwrap();
        assert!((v32 as f64 - (1.0 - (-1.0f64).exp())).abs() < 1e-6);
    }

    #[test]
    fn beta_moments_with_singular_density() {
        // E X = alpha / (alpha + beta) even when both parameters are below one
        for &(a, b) in &[(0.5f64, 0.3f64), (1.0, 1.0), (3.0, 2.0), (0.2, 4.0), (7.5, 0.6)] {
            let total = beta_expectation(a, b, |_, _| 1.0).unwrap();
            let mean = beta_expectation(a, b, |x, _| x).unwrap();
            assert!((total - 1.0).abs() < 1e-10, "({a},{b}) total {total}");
            assert!((mean - a / (a + b)).abs() < 1e-10, "({a},{b}) mean {mean}");
        }
    }

    #[test]
    fn non_convergence_reported() {
        // 1/x is not integrable on (0, 1)
        let err = integrate(|x: f64| 1.0 / x, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { .. }));
    }
}
