//! Packet success probability of a node as a function of its distance.
//!
//! Node `i` at distance `d` succeeds iff every opponent `j` is either farther
//! than `d` or backs off at its own distance. Distances are independent, so
//! `g_i(d)` is a product over opponents of
//!
//! ```text
//! q_j(d) = mu( (d, R]  U  {x : s_j(x) = 0} )
//! ```
//!
//! evaluated exactly with interval-set algebra.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval_set::IntervalSet;
use crate::radial_measure::RadialDistribution;
use crate::strategy::{GameConfig, Strategy, StrategyProfile};

/// `q_j(d)`: probability that opponent `j` does not beat a node at `d`.
pub fn opponent_factor(s_j: &Strategy, dist: &RadialDistribution, d: f64) -> Result<f64> {
    Error::check_range("distance", d, 0.0, dist.radius())?;
    Ok(opponent_factor_unchecked(s_j, dist, d))
}

pub(crate) fn opponent_factor_unchecked(s_j: &Strategy, dist: &RadialDistribution, d: f64) -> f64 {
    let r = dist.radius();
    let farther = IntervalSet::new([(d, r)]).expect("0 <= d <= R");
    farther.union(&s_j.backoff_complement(r)).measure(dist)
}

/// `g_i(d)` for node `i` under `profile`.
pub fn success_probability(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    d: f64,
) -> Result<f64> {
    cfg.check_node(i)?;
    cfg.check_profile(profile)?;
    Error::check_range("distance", d, 0.0, cfg.radius())?;
    Ok(success_unchecked(profile, cfg.distribution(), i, d))
}

pub(crate) fn success_unchecked(
    profile: &StrategyProfile,
    dist: &RadialDistribution,
    i: usize,
    d: f64,
) -> f64 {
    profile
        .opponents(i)
        .map(|s| opponent_factor_unchecked(s, dist, d))
        .product()
}

/// Sorted, deduplicated endpoints of every opponent's transmit intervals.
/// `g_i` is smooth between consecutive breakpoints.
pub fn opponent_breakpoints(profile: &StrategyProfile, i: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = profile
        .opponents(i)
        .flat_map(|s| s.transmit_set().endpoints().collect::<Vec<_>>())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `g_i` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessCurve {
    pub node_index: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub breakpoints: Vec<f64>,
}

impl SuccessCurve {
    /// Writes `d,g` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "d,g")?;
        for (d, g) in self.grid.iter().zip(&self.values) {
            writeln!(w, "{d},{g}")?;
        }
        Ok(())
    }
}

/// Evaluates `g_i` on `grid_size` equispaced points of `[0, R]` merged with
/// the opponents' breakpoints.
pub fn success_curve(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    grid_size: usize,
) -> Result<SuccessCurve> {
    if grid_size < 2 {
        return Err(Error::OutOfRange {
            what: "grid size",
            value: grid_size as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    let r = cfg.radius();
    let mut grid = uniform_grid(r, grid_size);
    grid.extend(
        opponent_breakpoints(profile, i)
            .into_iter()
            .filter(|&p| (0.0..=r).contains(&p)),
    );
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    success_curve_on(profile, cfg, i, &grid)
}

/// Evaluates `g_i` on an explicit grid (sorted or not; order is preserved).
pub fn success_curve_on(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    grid: &[f64],
) -> Result<SuccessCurve> {
    cfg.check_node(i)?;
    cfg.check_profile(profile)?;
    for &d in grid {
        Error::check_range("distance", d, 0.0, cfg.radius())?;
    }
    let dist = cfg.distribution();
    let values = grid
        .par_iter()
        .map(|&d| success_unchecked(profile, dist, i, d))
        .collect();
    Ok(SuccessCurve {
        node_index: i,
        grid: grid.to_vec(),
        values,
        breakpoints: opponent_breakpoints(profile, i),
    })
}

/// `n` equispaced points from 0 to `radius`, both ends exact.
pub fn uniform_grid(radius: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k + 1 == n {
                radius
            } else {
                radius * k as f64 / last
            }
        })
        .collect()
}
