use rand::Rng;
use serde::{Deserialize, Serialize};

use super::model::{CmppSpec, CmppTag};
use super::points::{Point, PointStream};
use crate::error::{invalid, Error, Result};
use crate::sequences::{BitPrefix, CountVector, ModelTag};

/// Expected number of lost marks of order `<= dmax` tolerated by truncation.
pub const DEFAULT_MARK_LOSS_TOLERANCE: f64 = 1e-3;

/// `epsilon = tol / (a dmax)`: the hazard intensity puts mass at most
/// `a dmax epsilon` on marks of order `<= dmax` above `1 - epsilon`.
pub fn epsilon_for_tolerance(a: f64, dmax: usize, tol: f64) -> Result<f64> {
    if !(a > 0.0) || dmax == 0 || !(tol > 0.0) {
        return Err(invalid(format!(
            "need a > 0, dmax >= 1 and tol > 0, got a={a}, dmax={dmax}, tol={tol}"
        )));
    }
    let eps = tol / (a * dmax as f64);
    if eps >= 1.0 {
        return Err(invalid(format!("tolerance {tol} gives epsilon {eps} >= 1")));
    }
    Ok(eps)
}

/// How a realization was cut short.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// Points at or above `1 - epsilon` were dropped.
    Epsilon(f64),
    /// Points were drawn until the partial sums reached this length.
    Covering(u64),
}

/// One draw of a marked model.
///
/// `marks[0]` is the initial mark `L_0` and `marks[i]` belongs to
/// `points[i - 1]`. Points ascend, except that the swapped model exchanges
/// its first two marked points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRealization {
    pub x0: f64,
    pub points: Vec<f64>,
    pub marks: Vec<u64>,
    pub partial_sums: Vec<u64>,
    pub truncation: Truncation,
    pub tag: CmppTag,
}

impl PointRealization {
    /// Builds a realization from `L_0, L_1, ...`, computing partial sums.
    pub fn from_marks(
        x0: f64,
        points: Vec<f64>,
        marks: Vec<u64>,
        truncation: Truncation,
        tag: CmppTag,
    ) -> Result<Self> {
        let partial_sums = marks
            .iter()
            .scan(0u64, |acc, &m| {
                *acc = acc.saturating_add(m);
                Some(*acc)
            })
            .collect();
        let real = Self { x0, points, marks, partial_sums, truncation, tag };
        real.validate()?;
        Ok(real)
    }

    pub fn validate(&self) -> Result<()> {
        if self.marks.len() != self.points.len() + 1 {
            return Err(invalid("need exactly one mark per point plus the initial mark"));
        }
        if self.marks.contains(&0) {
            return Err(invalid("marks must be positive"));
        }
        if self.partial_sums.len() != self.marks.len()
            || self.partial_sums[0] != self.marks[0]
            || (1..self.marks.len())
                .any(|r| self.partial_sums[r] != self.partial_sums[r - 1].saturating_add(self.marks[r]))
        {
            return Err(invalid("partial sums do not accumulate the marks"));
        }
        if self.points.iter().any(|&x| !(x > self.x0 && x < 1.0)) {
            return Err(invalid("points must lie in (x0, 1)"));
        }
        let skip = if self.tag == CmppTag::Swapped { 1 } else { 0 };
        let mut ordered: Vec<f64> = self.points.clone();
        if skip == 1 && ordered.len() >= 2 {
            ordered.swap(0, 1);
        }
        if ordered.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("points must be strictly ascending"));
        }
        Ok(())
    }

    /// `L_0`.
    pub fn initial_mark(&self) -> u64 {
        self.marks[0]
    }

    /// Position of the last one the marks account for.
    pub fn covered(&self) -> u64 {
        *self.partial_sums.last().expect("at least the initial mark")
    }
}

fn min_points(spec: &CmppSpec) -> usize {
    if spec.swaps_first_two() {
        2
    } else {
        0
    }
}

fn finish<R: Rng>(
    spec: &CmppSpec,
    x0: f64,
    pts: Vec<Point>,
    truncation: Truncation,
    rng: &mut R,
) -> Result<PointRealization> {
    let need = min_points(spec);
    if pts.len() < need {
        return Err(Error::TooFewPoints { got: pts.len(), need });
    }
    let mut marks = Vec::with_capacity(pts.len() + 1);
    marks.push(spec.initial_mark.sample_at(x0, 1.0 - x0, rng));
    for p in &pts {
        marks.push(spec.mark.sample_at(p.x, p.one_minus_x, rng));
    }
    let mut points: Vec<f64> = pts.iter().map(|p| p.x).collect();
    if spec.swaps_first_two() {
        points.swap(0, 1);
        marks.swap(1, 2);
    }
    PointRealization::from_marks(x0, points, marks, truncation, spec.tag.clone())
}

fn draw_x0<R: Rng>(spec: &CmppSpec, rng: &mut R) -> Result<f64> {
    let x0 = spec.initial.sample(rng);
    if !(0.0..1.0).contains(&x0) {
        return Err(Error::InvalidModel(format!("initial value {x0} outside [0, 1)")));
    }
    Ok(x0)
}

/// Full draw truncated at `1 - epsilon`: `X_0 ~ g`, the points below
/// `1 - epsilon`, `L_0 ~ r(X_0, ·)` and `L_i ~ q(X_i, ·)`. A model that swaps
/// its first two points keeps drawing past `1 - epsilon` until it has two.
/// The random stream is consumed in that order.
pub fn realize<R: Rng>(spec: &CmppSpec, epsilon: f64, rng: &mut R) -> Result<PointRealization> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let x0 = draw_x0(spec, rng)?;
    let need = min_points(spec);
    let mut stream = PointStream::new(&spec.intensity, x0);
    let mut pts = Vec::new();
    while let Some(p) = stream.next_point(rng) {
        if p.one_minus_x <= epsilon && pts.len() >= need {
            break;
        }
        pts.push(p);
    }
    finish(spec, x0, pts, Truncation::Epsilon(epsilon), rng)
}

/// Draw that keeps adding points until the partial sums reach `n`, so the
/// first `n` bits are fully determined. `L_0` is drawn first, then each point
/// together with its mark.
pub fn realize_prefix<R: Rng>(spec: &CmppSpec, n: u64, rng: &mut R) -> Result<PointRealization> {
    if n == 0 {
        return Err(invalid("prefix length must be at least 1"));
    }
    let x0 = draw_x0(spec, rng)?;
    let need = min_points(spec);
    let mut stream = PointStream::new(&spec.intensity, x0);
    let mut marks = vec![spec.initial_mark.sample_at(x0, 1.0 - x0, rng)];
    let mut pts: Vec<Point> = Vec::new();
    let mut covered = marks[0];
    while covered < n || pts.len() < need {
        let Some(p) = stream.next_point(rng) else { break };
        let m = spec.mark.sample_at(p.x, p.one_minus_x, rng);
        covered = covered.saturating_add(m);
        marks.push(m);
        pts.push(p);
    }
    if pts.len() < need {
        return Err(Error::TooFewPoints { got: pts.len(), need });
    }
    let mut points: Vec<f64> = pts.iter().map(|p| p.x).collect();
    if spec.swaps_first_two() {
        points.swap(0, 1);
        marks.swap(1, 2);
    }
    PointRealization::from_marks(x0, points, marks, Truncation::Covering(n), spec.tag.clone())
}

/// `Y_m = 1` exactly when `m` is a partial sum `L*_r`. When the marks do not
/// reach `n` the prefix is flagged as truncated: bits past the last partial
/// sum are unknown rather than zero.
pub fn assemble_bits(real: &PointRealization, n: usize) -> Result<BitPrefix> {
    let mut bits = vec![0u8; n];
    for &s in &real.partial_sums {
        if s as usize <= n && s >= 1 {
            bits[s as usize - 1] = 1;
        } else if s as usize > n {
            break;
        }
    }
    let truncated = real.covered() < n as u64;
    Ok(BitPrefix::from_parts(
        bits,
        ModelTag::CmppDerived(real.tag.label()),
        truncated,
    ))
}

/// `Z_k = #{i >= 1 : L_i = k}`; the initial mark is not a string.
pub fn counts_from_marks(real: &PointRealization, dmax: usize) -> Result<CountVector> {
    let mut z = CountVector::zeros(dmax)?;
    for &m in &real.marks[1..] {
        z.record(m);
    }
    Ok(z)
}

/// Counts of the strings completed by position `horizon`, matching
/// [`crate::sequences::count_strings`] on the assembled prefix.
pub fn counts_from_marks_within(real: &PointRealization, dmax: usize, horizon: u64) -> Result<CountVector> {
    let mut z = CountVector::zeros(dmax)?;
    for (i, &m) in real.marks.iter().enumerate().skip(1) {
        if real.partial_sums[i] > horizon {
            break;
        }
        z.record(m);
    }
    Ok(z)
}
