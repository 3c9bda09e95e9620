//! Sampling oracle for success probabilities and utilities.
//!
//! Opponent distances are drawn i.i.d. by inverse-CDF sampling, each
//! opponent applies its strategy, and the closest transmitter captures the
//! sink. Nothing here goes through interval measures, so agreement with
//! [`crate::success_prob`] is an independent check.
//!
//! Samples are split into fixed-size chunks; chunk `k` draws from a ChaCha8
//! stream `k` under the configured seed and chunk counts are summed as
//! integers, so results do not depend on the number of worker threads.

use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategy::{GameConfig, StrategyProfile};

pub const DEFAULT_CHUNK_SIZE: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    /// Pins one node at a fixed distance in [`estimate_success_rates`].
    #[serde(default)]
    pub conditioned_node: Option<(usize, f64)>,
    #[serde(default = "default_chunk")]
    pub chunk_size: u64,
}

fn default_chunk() -> u64 {
    DEFAULT_CHUNK_SIZE
}

impl SimConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SimConfig {
            samples,
            seed,
            conditioned_node: None,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn conditioned(mut self, node: usize, d: f64) -> Self {
        self.conditioned_node = Some((node, d));
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::OutOfRange {
                what: "samples",
                value: 0.0,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        if self.chunk_size == 0 {
            return Err(Error::OutOfRange {
                what: "chunk size",
                value: 0.0,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        Ok(())
    }

    fn chunks(&self) -> impl ParallelIterator<Item = (u64, u64)> + '_ {
        let n_chunks = self.samples.div_ceil(self.chunk_size);
        (0..n_chunks).into_par_iter().map(move |k| {
            let start = k * self.chunk_size;
            (k, (self.samples - start).min(self.chunk_size))
        })
    }

    fn rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chunk);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl SimEstimate {
    fn bernoulli(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        SimEstimate {
            mean: p,
            std_error: (p * (1.0 - p) / samples as f64).max(0.0).sqrt(),
            samples,
        }
    }

    /// Payoff `+1` on success and `-cost` on failure.
    fn payoff(hits: u64, samples: u64, cost: f64) -> Self {
        let p = hits as f64 / samples as f64;
        let spread = 1.0 + cost;
        SimEstimate {
            mean: spread * p - cost,
            std_error: spread * (p * (1.0 - p) / samples as f64).max(0.0).sqrt(),
            samples,
        }
    }
}

fn check_inputs(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    sim: &SimConfig,
) -> Result<()> {
    cfg.check_node(i)?;
    cfg.check_profile(profile)?;
    sim.validate()
}

/// Estimates `g_i` at every grid point with common random numbers: each
/// trial draws the opponents once and scores all distances, so estimates are
/// exactly non-increasing along a sorted grid.
pub fn estimate_success_curve(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    grid: &[f64],
    sim: &SimConfig,
) -> Result<Vec<SimEstimate>> {
    Ok(success_hits(profile, cfg, i, grid, sim)?
        .into_iter()
        .map(|h| SimEstimate::bernoulli(h, sim.samples))
        .collect())
}

fn success_hits(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    grid: &[f64],
    sim: &SimConfig,
) -> Result<Vec<u64>> {
    check_inputs(profile, cfg, i, sim)?;
    for &d in grid {
        Error::check_range("distance", d, 0.0, cfg.radius())?;
    }
    let dist = cfg.distribution();
    let opponents: Vec<_> = profile.opponents(i).collect();

    let (hits, ties) = sim
        .chunks()
        .map(|(k, len)| {
            let mut rng = sim.rng(k);
            let mut hits = vec![0u64; grid.len()];
            let mut ties = 0u64;
            for _ in 0..len {
                // distance of the closest transmitting opponent
                let mut closest = f64::INFINITY;
                for s in &opponents {
                    let x = dist.quantile_unchecked(rng.random::<f64>());
                    if s.transmits(x) && x < closest {
                        closest = x;
                    }
                }
                for (h, &d) in hits.iter_mut().zip(grid) {
                    if closest >= d {
                        *h += 1;
                        ties += u64::from(closest == d);
                    }
                }
            }
            (hits, ties)
        })
        .reduce(
            || (vec![0u64; grid.len()], 0u64),
            |(mut a, ta), (b, tb)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                (a, ta + tb)
            },
        );
    if ties > 0 {
        log::warn!("{ties} exact distance ties resolved in favor of node {i}");
    }
    Ok(hits)
}

/// Estimates `g_i(d)`: node `i` is pinned at `d` and forced to transmit.
pub fn estimate_success_probability(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    d: f64,
    sim: &SimConfig,
) -> Result<SimEstimate> {
    Ok(estimate_success_curve(profile, cfg, i, &[d], sim)?[0])
}

/// Estimates node `i`'s expected utility at distance `d` under its own
/// strategy: the transmit payoff when it transmits there, and exactly 0 when
/// it backs off.
pub fn estimate_expected_utility(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    d: f64,
    sim: &SimConfig,
) -> Result<SimEstimate> {
    check_inputs(profile, cfg, i, sim)?;
    let own = &profile.strategies()[i];
    if !own.evaluate(d, cfg.radius())? {
        return Ok(SimEstimate {
            mean: 0.0,
            std_error: 0.0,
            samples: sim.samples,
        });
    }
    let hits = success_hits(profile, cfg, i, &[d], sim)?[0];
    Ok(SimEstimate::payoff(hits, sim.samples, cfg.costs()[i]))
}

/// Per-node probability of transmitting and being captured, with every
/// distance drawn at random except `sim.conditioned_node`, if set.
pub fn estimate_success_rates(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    sim: &SimConfig,
) -> Result<Vec<SimEstimate>> {
    cfg.check_profile(profile)?;
    sim.validate()?;
    if let Some((node, d)) = sim.conditioned_node {
        cfg.check_node(node)?;
        Error::check_range("distance", d, 0.0, cfg.radius())?;
    }
    let n = cfg.n();
    let dist = cfg.distribution();
    let strategies = profile.strategies();

    let wins = sim
        .chunks()
        .map(|(k, len)| {
            let mut rng = sim.rng(k);
            let mut wins = vec![0u64; n];
            for _ in 0..len {
                let mut winner: Option<(usize, f64)> = None;
                for (j, s) in strategies.iter().enumerate() {
                    let x = match sim.conditioned_node {
                        Some((node, d)) if node == j => d,
                        _ => dist.quantile_unchecked(rng.random::<f64>()),
                    };
                    if s.transmits(x) && winner.is_none_or(|(_, best)| x < best) {
                        winner = Some((j, x));
                    }
                }
                if let Some((j, _)) = winner {
                    wins[j] += 1;
                }
            }
            wins
        })
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(wins
        .into_iter()
        .map(|w| SimEstimate::bernoulli(w, sim.samples))
        .collect())
}
