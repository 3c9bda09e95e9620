//! Solver and simulator for the one-shot random access game with imperfect
//! location information.
//!
//! `n` selfish nodes are dropped i.i.d. on a disk of radius `R` around a
//! common sink. Each node knows its own distance to the sink but only the
//! law of the others'. A transmitting node succeeds iff it is the closest
//! transmitter (capture), earning 1; a failed transmission costs `c_i`.
//!
//! The crate is organized bottom-up:
//!
//! * [`radial_measure`]: the common distance law on `[0, R]`.
//! * [`interval_set`]: exact half-open interval algebra used for strategies.
//! * [`strategy`]: transmit/back-off maps, profiles and game instances.
//! * [`success_prob`]: packet success probability `g_i(d)`.
//! * [`best_response`]: expected transmit utility and cut-off best responses.
//! * [`equilibrium`]: threshold equilibria and their verification.
//! * [`monte_carlo`]: an independent sampling oracle for all of the above.

pub mod best_response;
pub mod equilibrium;
mod error;
pub mod interval_set;
pub mod monte_carlo;
pub mod radial_measure;
pub mod strategy;
pub mod success_prob;

pub use best_response::{
    best_response_threshold, expected_utility_transmit, BestResponseResult, BoundaryCase,
    Tolerances,
};
pub use equilibrium::{
    damped_best_response, solve_sequential, solve_symmetric_uniform, verify_nash, CostClass,
    EquilibriumReport, ThresholdProfile,
};
pub use error::{Error, Result};
pub use interval_set::{Interval, IntervalSet};
pub use monte_carlo::{
    estimate_expected_utility, estimate_success_curve, estimate_success_probability, SimConfig,
    SimEstimate,
};
pub use radial_measure::{DistributionKind, DistributionSpec, RadialDistribution};
pub use strategy::{GameConfig, GameConfigSpec, Strategy, StrategyProfile, StrategySpec};
pub use success_prob::{opponent_factor, success_curve, success_probability, SuccessCurve};
