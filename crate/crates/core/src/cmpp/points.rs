use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::model::{CmppSpec, Intensity};
use crate::error::{invalid, Result};

/// One point of the process: location, `1 - location` at full precision, and
/// the unit-rate arrival time it was inverted from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Point {
    pub x: f64,
    pub one_minus_x: f64,
    pub gamma: f64,
}

/// Unbounded stream of points `X_i = Λ^{-1}(Γ_i)` for unit-rate arrivals
/// `Γ_1 < Γ_2 < ...`; ends only when the intensity has finite total mass
/// or `1 - X_i` underflows.
pub(crate) struct PointStream<'a> {
    intensity: &'a Intensity,
    x0: f64,
    gamma: f64,
}

impl<'a> PointStream<'a> {
    pub fn new(intensity: &'a Intensity, x0: f64) -> Self {
        Self { intensity, x0, gamma: 0.0 }
    }

    pub fn next_point<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<Point> {
        let step: f64 = Exp1.sample(rng);
        self.gamma += step;
        let (x, one_minus_x) = self.intensity.inverse(self.x0, self.gamma)?;
        if one_minus_x <= 0.0 {
            return None;
        }
        Some(Point { x, one_minus_x, gamma: self.gamma })
    }
}

fn check_window(x0: f64, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(x0 >= 0.0) || !(epsilon < 1.0 - x0) {
        return Err(invalid(format!(
            "need 0 < epsilon < 1 - x0, got epsilon={epsilon}, x0={x0}"
        )));
    }
    Ok(())
}

/// Points below `1 - epsilon`, with their arrival times.
pub(crate) fn points_below<R: Rng + ?Sized>(
    intensity: &Intensity,
    x0: f64,
    epsilon: f64,
    rng: &mut R,
) -> Vec<Point> {
    let mut stream = PointStream::new(intensity, x0);
    let mut out = Vec::new();
    while let Some(p) = stream.next_point(rng) {
        if p.one_minus_x <= epsilon {
            break;
        }
        out.push(p);
    }
    out
}

/// Ascending points of the process given `X_0 = x0`, kept while below
/// `1 - epsilon`. For the hazard intensity `a / (1 - x)` the points are
/// `1 - (1 - x0) exp(-Γ_i / a)`.
pub fn sample_points<R: Rng + ?Sized>(
    spec: &CmppSpec,
    x0: f64,
    epsilon: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_window(x0, epsilon)?;
    Ok(points_below(&spec.intensity, x0, epsilon, rng)
        .into_iter()
        .map(|p| p.x)
        .collect())
}

/// Record values above `x0` of an iid Beta(1, a) sequence, kept while below
/// `1 - epsilon`, drawing at most `max_draws` variables. A second,
/// independent construction of the hazard-intensity process.
pub fn record_points<R: Rng + ?Sized>(
    a: f64,
    x0: f64,
    epsilon: f64,
    max_draws: u64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(a > 0.0) {
        return Err(invalid(format!("a must be positive, got {a}")));
    }
    check_window(x0, epsilon)?;
    let mut records = Vec::new();
    let mut current = x0;
    for _ in 0..max_draws {
        // Beta(1, a) by inversion: 1 - U^(1/a)
        let u: f64 = rng.random();
        let v = 1.0 - (1.0 - u).powf(1.0 / a);
        if v > current {
            if v >= 1.0 - epsilon {
                break;
            }
            records.push(v);
            current = v;
        }
    }
    Ok(records)
}
