//! The common law of node-sink distances on `[0, R]`.
//!
//! Two families are supported: nodes uniform over the disk area, for which
//! `F(d) = (d/R)^2` in closed form, and a general piecewise-linear CDF given
//! by knots. Everything downstream only needs the CDF, so interval measures
//! stay exact sums of CDF differences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knot count used by [`RadialDistribution::from_density_fn`] callers that
/// have no better choice.
pub const DEFAULT_DENSITY_KNOTS: usize = 10_000;

const KNOT_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    /// Nodes uniform over the disk area.
    UniformDisk,
    /// Linear interpolation between `(d_k, F_k)` knots, `d_0 = 0`, `F_0 = 0`,
    /// `d_last = R`, `F_last = 1`.
    PiecewiseLinearCdf { knots: Vec<(f64, f64)> },
}

/// Atomless distance law on `[0, R]`.
///
/// Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionSpec", into = "DistributionSpec")]
pub struct RadialDistribution {
    radius: f64,
    kind: DistributionKind,
    density_sup: Option<f64>,
    strictly_increasing: bool,
}

impl RadialDistribution {
    pub fn uniform_disk(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(Self {
            radius,
            kind: DistributionKind::UniformDisk,
            density_sup: Some(2.0 / radius),
            strictly_increasing: true,
        })
    }

    /// Builds a piecewise-linear CDF from `(d, F)` knots.
    ///
    /// The first knot must be `(0, 0)` and the last `(R, 1)`; endpoint values
    /// within `1e-12` are snapped. Distances must strictly increase and CDF
    /// values must not decrease.
    pub fn piecewise_linear(radius: f64, knots: Vec<(f64, f64)>) -> Result<Self> {
        check_radius(radius)?;
        if knots.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 knots, got {}",
                knots.len()
            )));
        }
        let mut knots = knots;
        if knots.iter().any(|&(d, f)| !d.is_finite() || !f.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite knot".into()));
        }
        let last = knots.len() - 1;
        let (d0, f0) = knots[0];
        let (dl, fl) = knots[last];
        if d0.abs() > KNOT_SNAP * radius || f0.abs() > KNOT_SNAP {
            return Err(Error::InvalidDistribution(format!(
                "first knot must be (0, 0), got ({d0}, {f0})"
            )));
        }
        if (dl - radius).abs() > KNOT_SNAP * radius || (fl - 1.0).abs() > KNOT_SNAP {
            return Err(Error::InvalidDistribution(format!(
                "last knot must be ({radius}, 1), got ({dl}, {fl})"
            )));
        }
        knots[0] = (0.0, 0.0);
        knots[last] = (radius, 1.0);

        let mut density_sup: f64 = 0.0;
        let mut strictly_increasing = true;
        for w in knots.windows(2) {
            let ((da, fa), (db, fb)) = (w[0], w[1]);
            if db <= da {
                return Err(Error::InvalidDistribution(format!(
                    "knot distances must strictly increase ({da} then {db})"
                )));
            }
            if fb < fa {
                return Err(Error::InvalidDistribution(format!(
                    "CDF must be non-decreasing ({fa} then {fb})"
                )));
            }
            if fb == fa {
                strictly_increasing = false;
            }
            density_sup = density_sup.max((fb - fa) / (db - da));
        }
        Ok(Self {
            radius,
            kind: DistributionKind::PiecewiseLinearCdf { knots },
            density_sup: Some(density_sup),
            strictly_increasing,
        })
    }

    /// Resamples a (not necessarily normalized) density onto `knots`
    /// equispaced CDF knots, integrating each cell with the trapezoid rule.
    pub fn from_density_fn<F>(radius: f64, density: F, knots: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        check_radius(radius)?;
        if knots < 2 {
            return Err(Error::InvalidDistribution("need at least 2 knots".into()));
        }
        let step = radius / (knots - 1) as f64;
        let xs: Vec<f64> = (0..knots).map(|k| k as f64 * step).collect();
        let mut mass = Vec::with_capacity(knots);
        mass.push(0.0);
        let mut acc = 0.0;
        for w in xs.windows(2) {
            let (fa, fb) = (density(w[0]), density(w[1]));
            if !(fa >= 0.0 && fb >= 0.0 && fa.is_finite() && fb.is_finite()) {
                return Err(Error::InvalidDistribution(format!(
                    "density must be finite and non-negative near d = {}",
                    w[0]
                )));
            }
            acc += 0.5 * (fa + fb) * (w[1] - w[0]);
            mass.push(acc);
        }
        if acc <= 0.0 {
            return Err(Error::InvalidDistribution("density has zero mass".into()));
        }
        let pts = xs
            .into_iter()
            .zip(mass)
            .map(|(d, m)| (d, m / acc))
            .collect();
        Self::piecewise_linear(radius, pts)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    /// `sup f`, when the density is bounded.
    pub fn density_sup(&self) -> Option<f64> {
        self.density_sup
    }

    /// True when `F` is strictly increasing on `[0, R]`, i.e. every interval
    /// of positive length has positive probability.
    pub fn is_strictly_increasing(&self) -> bool {
        self.strictly_increasing
    }

    pub fn cdf(&self, d: f64) -> Result<f64> {
        Error::check_range("distance", d, 0.0, self.radius)?;
        Ok(self.cdf_unchecked(d))
    }

    /// `F(b) - F(a)`, the mass of `(a, b]`.
    pub fn interval_measure(&self, a: f64, b: f64) -> Result<f64> {
        Error::check_range("distance", a, 0.0, self.radius)?;
        Error::check_range("distance", b, 0.0, self.radius)?;
        if a > b {
            return Err(Error::InvalidInterval { lo: a, hi: b });
        }
        Ok(self.measure_unchecked(a, b))
    }

    /// The smallest `d` with `F(d) = p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        Error::check_range("probability", p, 0.0, 1.0)?;
        Ok(self.quantile_unchecked(p))
    }

    /// Density at `d` (right derivative of the CDF at knots).
    pub fn density(&self, d: f64) -> Result<f64> {
        Error::check_range("distance", d, 0.0, self.radius)?;
        Ok(match &self.kind {
            DistributionKind::UniformDisk => 2.0 * d / (self.radius * self.radius),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                let j = segment_index(knots, d);
                let ((da, fa), (db, fb)) = (knots[j], knots[j + 1]);
                (fb - fa) / (db - da)
            }
        })
    }

    pub(crate) fn cdf_unchecked(&self, d: f64) -> f64 {
        let d = d.clamp(0.0, self.radius);
        match &self.kind {
            DistributionKind::UniformDisk => {
                if d >= self.radius {
                    1.0
                } else {
                    let x = d / self.radius;
                    x * x
                }
            }
            DistributionKind::PiecewiseLinearCdf { knots } => {
                if d >= self.radius {
                    return 1.0;
                }
                let j = segment_index(knots, d);
                let ((da, fa), (db, fb)) = (knots[j], knots[j + 1]);
                fa + (fb - fa) * (d - da) / (db - da)
            }
        }
    }

    pub(crate) fn measure_unchecked(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            0.0
        } else {
            (self.cdf_unchecked(b) - self.cdf_unchecked(a)).max(0.0)
        }
    }

    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        match &self.kind {
            DistributionKind::UniformDisk => self.radius * p.sqrt(),
            DistributionKind::PiecewiseLinearCdf { knots } => {
                if p <= 0.0 {
                    return 0.0;
                }
                // first knot with F >= p; F_0 = 0 < p so j >= 1
                let j = knots.partition_point(|&(_, f)| f < p);
                if j >= knots.len() {
                    return self.radius;
                }
                let ((da, fa), (db, fb)) = (knots[j - 1], knots[j]);
                let d = da + (p - fa) / (fb - fa) * (db - da);
                d.clamp(da, db)
            }
        }
    }

    fn to_spec(&self) -> DistributionSpec {
        match &self.kind {
            DistributionKind::UniformDisk => DistributionSpec::UniformDisk {
                radius: Some(self.radius),
            },
            DistributionKind::PiecewiseLinearCdf { knots } => {
                DistributionSpec::PiecewiseLinearCdf {
                    radius: Some(self.radius),
                    knots: knots.iter().map(|&(d, f)| [d, f]).collect(),
                }
            }
        }
    }
}

/// Index `j` of the knot segment `[d_j, d_{j+1})` containing `d < R`.
fn segment_index(knots: &[(f64, f64)], d: f64) -> usize {
    let j = knots.partition_point(|&(x, _)| x <= d);
    j.saturating_sub(1).min(knots.len() - 2)
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!(
            "radius must be finite and positive, got {radius}"
        )))
    }
}

/// JSON form of a distribution.
///
/// `radius` may be omitted when the distribution is embedded in a game
/// configuration that carries it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistributionSpec {
    UniformDisk {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
    },
    PiecewiseLinearCdf {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        knots: Vec<[f64; 2]>,
    },
}

impl DistributionSpec {
    pub fn radius(&self) -> Option<f64> {
        match self {
            DistributionSpec::UniformDisk { radius }
            | DistributionSpec::PiecewiseLinearCdf { radius, .. } => *radius,
        }
    }

    /// Builds the distribution, taking the radius from `fallback` when the
    /// spec has none. Both present and different is an error.
    pub fn build(self, fallback: Option<f64>) -> Result<RadialDistribution> {
        let radius = match (self.radius(), fallback) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidDistribution(format!(
                    "distribution radius {a} disagrees with game radius {b}"
                )))
            }
            (Some(r), _) | (None, Some(r)) => r,
            (None, None) => {
                return Err(Error::InvalidDistribution("missing radius".into()));
            }
        };
        match self {
            DistributionSpec::UniformDisk { .. } => RadialDistribution::uniform_disk(radius),
            DistributionSpec::PiecewiseLinearCdf { knots, .. } => {
                RadialDistribution::piecewise_linear(
                    radius,
                    knots.into_iter().map(|[d, f]| (d, f)).collect(),
                )
            }
        }
    }
}

impl TryFrom<DistributionSpec> for RadialDistribution {
    type Error = Error;

    fn try_from(spec: DistributionSpec) -> Result<Self> {
        spec.build(None)
    }
}

impl From<RadialDistribution> for DistributionSpec {
    fn from(dist: RadialDistribution) -> Self {
        dist.to_spec()
    }
}

impl From<&RadialDistribution> for DistributionSpec {
    fn from(dist: &RadialDistribution) -> Self {
        dist.to_spec()
    }
}
