//! Node strategies, strategy profiles and game instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval_set::IntervalSet;
use crate::radial_measure::{DistributionSpec, RadialDistribution};

/// Deterministic transmit/back-off decision as a function of the node's own
/// distance to the sink, stored as the set of distances where it transmits.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StrategySpec", into = "StrategySpec")]
pub struct Strategy {
    transmit: IntervalSet,
}

impl Strategy {
    /// Transmits on `[0, t]`. `t = 0` never transmits (up to a null set).
    pub fn threshold(t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::OutOfRange {
                what: "threshold",
                value: t,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(Strategy {
            transmit: IntervalSet::new([(0.0, t)])?,
        })
    }

    pub fn from_intervals<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Ok(Strategy {
            transmit: IntervalSet::new(pairs)?,
        })
    }

    pub fn from_set(transmit: IntervalSet) -> Self {
        Strategy { transmit }
    }

    pub fn silent() -> Self {
        Strategy::default()
    }

    pub fn always(radius: f64) -> Self {
        Strategy {
            transmit: IntervalSet::full(radius),
        }
    }

    pub fn transmit_set(&self) -> &IntervalSet {
        &self.transmit
    }

    /// Whether the node transmits at distance `d`, with no range check.
    pub fn transmits(&self, d: f64) -> bool {
        self.transmit.contains(d)
    }

    pub fn evaluate(&self, d: f64, radius: f64) -> Result<bool> {
        Error::check_range("distance", d, 0.0, radius)?;
        Ok(self.transmits(d))
    }

    /// Subjective transmission probability: the mass of the transmit set.
    pub fn transmit_probability(&self, dist: &RadialDistribution) -> f64 {
        self.transmit.measure(dist)
    }

    /// Distances in `[0, radius]` where the node backs off.
    pub fn backoff_complement(&self, radius: f64) -> IntervalSet {
        self.transmit.complement(radius)
    }

    /// Cut-off point when this is a threshold strategy (a single transmit
    /// interval starting at 0, or nothing at all).
    pub fn cutoff(&self) -> Option<f64> {
        match self.transmit.intervals() {
            [] => Some(0.0),
            [only] if only.lo == 0.0 => Some(only.hi),
            _ => None,
        }
    }
}

/// Raw JSON form of a [`Strategy`]: `{"threshold": t}` or
/// `{"intervals": [[a, b], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum StrategySpec {
    Threshold { threshold: f64 },
    Intervals { intervals: Vec<[f64; 2]> },
}

impl TryFrom<StrategySpec> for Strategy {
    type Error = Error;

    fn try_from(spec: StrategySpec) -> Result<Self> {
        match spec {
            StrategySpec::Threshold { threshold } => Strategy::threshold(threshold),
            StrategySpec::Intervals { intervals } => {
                Strategy::from_intervals(intervals.into_iter().map(|[a, b]| (a, b)))
            }
        }
    }
}

impl From<Strategy> for StrategySpec {
    fn from(s: Strategy) -> Self {
        match s.transmit.intervals() {
            [only] if only.lo == 0.0 => StrategySpec::Threshold { threshold: only.hi },
            ivs => StrategySpec::Intervals {
                intervals: ivs.iter().map(|&i| i.into()).collect(),
            },
        }
    }
}

/// One strategy per node, indexed from 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyProfile {
    strategies: Vec<Strategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<Strategy>) -> Self {
        StrategyProfile { strategies }
    }

    pub fn from_thresholds(thresholds: &[f64]) -> Result<Self> {
        let strategies = thresholds
            .iter()
            .map(|&t| Strategy::threshold(t))
            .collect::<Result<_>>()?;
        Ok(StrategyProfile { strategies })
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn get(&self, i: usize) -> Option<&Strategy> {
        self.strategies.get(i)
    }

    /// Replaces node `i`'s strategy, returning the new profile.
    pub fn with(&self, i: usize, s: Strategy) -> Self {
        let mut strategies = self.strategies.clone();
        strategies[i] = s;
        StrategyProfile { strategies }
    }

    /// Strategies of every node except `i`.
    pub fn opponents(&self, i: usize) -> impl Iterator<Item = &Strategy> + '_ {
        self.strategies
            .iter()
            .enumerate()
            .filter(move |&(j, _)| j != i)
            .map(|(_, s)| s)
    }

    /// Cut-offs of a threshold profile; `None` if any node is not threshold.
    pub fn cutoffs(&self) -> Option<Vec<f64>> {
        self.strategies.iter().map(Strategy::cutoff).collect()
    }
}

/// A full game instance: distance law, node count and failure costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameConfigSpec", into = "GameConfigSpec")]
pub struct GameConfig {
    distribution: RadialDistribution,
    costs: Vec<f64>,
}

impl GameConfig {
    pub fn new(distribution: RadialDistribution, costs: Vec<f64>) -> Result<Self> {
        if costs.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 nodes, got {}",
                costs.len()
            )));
        }
        if let Some((i, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::InvalidConfig(format!(
                "cost of node {i} must be finite and positive, got {c}"
            )));
        }
        Ok(GameConfig {
            distribution,
            costs,
        })
    }

    /// `n` nodes, all with cost `c`, uniform over a disk of radius `radius`.
    pub fn symmetric_uniform(n: usize, c: f64, radius: f64) -> Result<Self> {
        GameConfig::new(RadialDistribution::uniform_disk(radius)?, vec![c; n])
    }

    pub fn distribution(&self) -> &RadialDistribution {
        &self.distribution
    }

    pub fn radius(&self) -> f64 {
        self.distribution.radius()
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, i: usize) -> Result<f64> {
        self.check_node(i)?;
        Ok(self.costs[i])
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::NodeIndex {
                index: i,
                n: self.n(),
            })
        }
    }

    /// A profile matches when it has one strategy per node and every
    /// transmit interval lies inside `[0, R]`.
    pub fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.len() != self.n() {
            return Err(Error::InvalidConfig(format!(
                "profile has {} strategies for {} nodes",
                profile.len(),
                self.n()
            )));
        }
        let r = self.radius();
        for (j, s) in profile.strategies().iter().enumerate() {
            let sup = s.transmit_set().sup();
            if sup > r {
                return Err(Error::InvalidConfig(format!(
                    "strategy of node {j} transmits up to {sup}, beyond radius {r}"
                )));
            }
        }
        Ok(())
    }
}

/// Raw JSON form of a [`GameConfig`], before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfigSpec {
    pub radius: f64,
    pub n: usize,
    pub costs: Vec<f64>,
    pub distribution: DistributionSpec,
}

impl TryFrom<GameConfigSpec> for GameConfig {
    type Error = Error;

    fn try_from(spec: GameConfigSpec) -> Result<Self> {
        if spec.n != spec.costs.len() {
            return Err(Error::InvalidConfig(format!(
                "n = {} but {} costs given",
                spec.n,
                spec.costs.len()
            )));
        }
        let dist = spec.distribution.build(Some(spec.radius))?;
        GameConfig::new(dist, spec.costs)
    }
}

impl From<GameConfig> for GameConfigSpec {
    fn from(cfg: GameConfig) -> Self {
        GameConfigSpec {
            radius: cfg.radius(),
            n: cfg.n(),
            distribution: DistributionSpec::from(&cfg.distribution),
            costs: cfg.costs,
        }
    }
}
