use std::fmt::Debug;
use std::sync::Arc;

use rand::{Rng, RngCore};
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use super::marks::MarkLaw;
use crate::error::{invalid, Error, Result};
use crate::exact::quadrature::integrate;

/// User-supplied initial-value law for custom models.
pub trait InitialSampler: Send + Sync + Debug {
    fn density(&self, x: f64) -> f64;
    fn sample(&self, rng: &mut dyn RngCore) -> f64;
}

/// User-supplied intensity for custom models.
pub trait IntensitySampler: Send + Sync + Debug {
    /// `λ_w(x)`.
    fn rate(&self, w: f64, x: f64) -> f64;
    /// Point `x` with `Λ_w(x) = gamma`, returned with `1 - x`; `None` once
    /// `gamma` exceeds the total mass of the intensity.
    fn inverse_cumulative(&self, w: f64, gamma: f64) -> Option<(f64, f64)>;
}

/// Density `g` of the initial value `X_0`.
#[derive(Debug, Clone)]
pub enum InitialLaw {
    Beta { alpha: f64, beta: f64, dist: Beta<f64> },
    PointMass(f64),
    Custom(Arc<dyn InitialSampler>),
}

impl InitialLaw {
    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        let dist = Beta::new(alpha, beta)
            .map_err(|e| invalid(format!("Beta({alpha}, {beta}) initial law: {e}")))?;
        Ok(InitialLaw::Beta { alpha, beta, dist })
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            InitialLaw::Beta { dist, .. } => dist.sample(rng),
            InitialLaw::PointMass(x) => *x,
            InitialLaw::Custom(c) => c.sample(rng),
        }
    }
}

/// Conditional intensity `λ_w(x)` of the point process given `X_0 = w`.
#[derive(Debug, Clone)]
pub enum Intensity {
    /// `a / (1 - x)` on `(w, 1)`, the failure rate of Beta(1, a). Cumulative
    /// intensity `Λ_w(x) = a ln((1 - w) / (1 - x))`.
    Hazard { a: f64 },
    Custom(Arc<dyn IntensitySampler>),
}

impl Intensity {
    pub fn rate(&self, w: f64, x: f64) -> f64 {
        match self {
            Intensity::Hazard { a } => {
                if x > w && x < 1.0 {
                    a / (1.0 - x)
                } else {
                    0.0
                }
            }
            Intensity::Custom(c) => c.rate(w, x),
        }
    }

    /// `Λ_w(x) = ∫_w^x λ_w(u) du`, closed form for the hazard family only.
    pub fn cumulative(&self, w: f64, x: f64) -> Option<f64> {
        match self {
            Intensity::Hazard { a } if x >= w => Some(a * ((1.0 - w) / (1.0 - x)).ln()),
            Intensity::Hazard { .. } => Some(0.0),
            Intensity::Custom(_) => None,
        }
    }

    /// Inversion image `(x, 1 - x)` of a unit-rate arrival time `gamma`.
    pub fn inverse(&self, w: f64, gamma: f64) -> Option<(f64, f64)> {
        match self {
            Intensity::Hazard { a } => {
                let omx = (1.0 - w) * (-gamma / a).exp();
                if omx <= 0.0 {
                    None
                } else {
                    Some((1.0 - omx, omx))
                }
            }
            Intensity::Custom(c) => c.inverse_cumulative(w, gamma),
        }
    }
}

/// Named model families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmppTag {
    /// Beta(b, a) initial value, geometric marks: yields `Bern(a, b)`.
    BetaBern { a: f64, b: f64 },
    /// Beta(b - 1, a + 1) initial value, `L_0 = 1`: yields `Bern1(a, b)`.
    BetaBern1 { a: f64, b: f64 },
    /// `BetaBern` with initial mark law `k x^(k-1) (1 - x)^2`.
    Plus { a: f64, b: f64 },
    /// `BetaBern(1, 0)` with `(X_0, L_0) = (0, 1)` and the first two marked
    /// points exchanged.
    Swapped,
    Custom(String),
}

impl CmppTag {
    pub fn label(&self) -> String {
        match self {
            CmppTag::BetaBern { a, b } => format!("beta_bern({a},{b})"),
            CmppTag::BetaBern1 { a, b } => format!("beta_bern1({a},{b})"),
            CmppTag::Plus { a, b } => format!("plus({a},{b})"),
            CmppTag::Swapped => "swapped".to_string(),
            CmppTag::Custom(name) => format!("custom({name})"),
        }
    }
}

/// A model `M(g, r, λ, q)`.
#[derive(Debug, Clone)]
pub struct CmppSpec {
    pub tag: CmppTag,
    pub initial: InitialLaw,
    pub initial_mark: MarkLaw,
    pub intensity: Intensity,
    pub mark: MarkLaw,
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("a must be positive and finite, got {a}")));
    }
    Ok(())
}

impl CmppSpec {
    /// Model producing `Bern(a, b)`; `b = 0` uses `X_0 = 0`, the limit of
    /// Beta(b, a) as `b -> 0`.
    pub fn beta_bern(a: f64, b: f64) -> Result<Self> {
        check_a(a)?;
        if !(b >= 0.0) || !b.is_finite() {
            return Err(invalid(format!("b must be nonnegative, got {b}")));
        }
        let initial = if b == 0.0 {
            InitialLaw::PointMass(0.0)
        } else {
            InitialLaw::beta(b, a)?
        };
        Ok(Self {
            tag: CmppTag::BetaBern { a, b },
            initial,
            initial_mark: MarkLaw::Geometric,
            intensity: Intensity::Hazard { a },
            mark: MarkLaw::Geometric,
        })
    }

    /// Model producing `Bern1(a, b)` for `b >= 1`.
    pub fn beta_bern1(a: f64, b: f64) -> Result<Self> {
        check_a(a)?;
        if !(b >= 1.0) || !b.is_finite() {
            return Err(invalid(format!(
                "the Bern1 marked Poisson model needs b >= 1, got {b}"
            )));
        }
        let initial = if b == 1.0 {
            InitialLaw::PointMass(0.0)
        } else {
            InitialLaw::beta(b - 1.0, a + 1.0)?
        };
        Ok(Self {
            tag: CmppTag::BetaBern1 { a, b },
            initial,
            initial_mark: MarkLaw::One,
            intensity: Intensity::Hazard { a },
            mark: MarkLaw::Geometric,
        })
    }

    /// `BetaBern(a, b)` with the `r+` initial mark; `a, b > 0`.
    pub fn plus(a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(invalid("the r+ model needs b > 0"));
        }
        let mut spec = Self::beta_bern(a, b)?;
        spec.tag = CmppTag::Plus { a, b };
        spec.initial_mark = MarkLaw::SumOfTwoGeometrics;
        Ok(spec)
    }

    pub fn swapped() -> Self {
        Self {
            tag: CmppTag::Swapped,
            initial: InitialLaw::PointMass(0.0),
            initial_mark: MarkLaw::One,
            intensity: Intensity::Hazard { a: 1.0 },
            mark: MarkLaw::Geometric,
        }
    }

    /// Custom model; it is validated against `dmax` before being returned.
    pub fn custom(
        name: impl Into<String>,
        initial: InitialLaw,
        initial_mark: MarkLaw,
        intensity: Intensity,
        mark: MarkLaw,
        dmax: usize,
    ) -> Result<Self> {
        let spec = Self {
            tag: CmppTag::Custom(name.into()),
            initial,
            initial_mark,
            intensity,
            mark,
        };
        spec.validate(dmax)?;
        Ok(spec)
    }

    /// `a` of the hazard intensity, when the model has one.
    pub fn hazard_rate(&self) -> Option<f64> {
        match self.intensity {
            Intensity::Hazard { a } => Some(a),
            Intensity::Custom(_) => None,
        }
    }

    pub fn swaps_first_two(&self) -> bool {
        self.tag == CmppTag::Swapped
    }

    /// Numerical checks of the model hypotheses on a grid of locations:
    /// both mark laws sum to one within `1e-12`, the intensity is
    /// nonnegative, and `∫ λ_w(x) q(x, k) dx` is finite for every `k <= dmax`
    /// (quadrature must converge).
    pub fn validate(&self, dmax: usize) -> Result<()> {
        if dmax == 0 {
            return Err(invalid("dmax must be at least 1"));
        }
        match &self.initial {
            InitialLaw::PointMass(x) if !(0.0..1.0).contains(x) => {
                return Err(Error::InvalidModel(format!("initial point mass {x} outside [0, 1)")));
            }
            InitialLaw::Custom(c) => {
                if GRID.iter().any(|&x| !(c.density(x) >= 0.0)) {
                    return Err(Error::InvalidModel("initial density is negative".into()));
                }
            }
            _ => {}
        }
        for &x in GRID.iter() {
            for (law, name) in [(&self.initial_mark, "r"), (&self.mark, "q")] {
                let total = mass(law, x);
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidModel(format!(
                        "{name}({x}, ·) sums to {total}, not 1"
                    )));
                }
            }
            for &w in GRID.iter() {
                if !(self.intensity.rate(w, x) >= 0.0) {
                    return Err(Error::InvalidModel(format!("intensity negative at w={w}, x={x}")));
                }
            }
        }
        for &w in &[0.0, 0.5, 0.9] {
            for k in 1..=dmax as u64 {
                let v = integrate(
                    |x: f64| self.intensity.rate(w, x) * self.mark.pmf(x, k),
                    w,
                    1.0,
                )
                .map_err(|_| {
                    Error::InvalidModel(format!(
                        "∫ λ_{w}(x) q(x, {k}) dx does not converge; Z_{k} would be infinite"
                    ))
                })?;
                if !v.is_finite() {
                    return Err(Error::InvalidModel(format!("∫ λ_{w} q(·, {k}) is infinite")));
                }
            }
        }
        Ok(())
    }
}

const GRID: [f64; 12] = [0.01, 0.05, 0.13, 0.25, 0.37, 0.5, 0.62, 0.75, 0.83, 0.9, 0.95, 0.99];

fn mass(law: &MarkLaw, x: f64) -> f64 {
    let mut total = 0.0;
    let mut k = 1u64;
    loop {
        let p = law.pmf(x, k);
        total += p;
        if (p < 1e-20 && k > 10) || k > 1_000_000 {
            break;
        }
        k += 1;
    }
    total
}
