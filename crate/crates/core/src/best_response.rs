//! Expected transmit utility and cut-off best responses.
//!
//! A node at distance `d` that transmits earns `+1` with probability
//! `g_i(d)` and `-c_i` otherwise, so `E(d) = (1 + c_i) g_i(d) - c_i`.
//! `E` is continuous and non-increasing with `E(0) = 1`; the best response
//! transmits exactly where `E > 0` (ties back off), which is always a cut-off
//! strategy. The cut-off is the first point where `E` reaches zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategy::{GameConfig, Strategy, StrategyProfile};
use crate::success_prob::{opponent_breakpoints, success_unchecked};

const MAX_BISECTION_STEPS: usize = 2_000;

/// Numeric tolerances shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest acceptable final bisection bracket, as a fraction of `R`.
    pub distance: f64,
    /// `|E|` at or below this counts as zero utility.
    pub utility: f64,
    /// Largest threshold disagreement accepted by verification, as a
    /// fraction of `R`.
    pub threshold_match: f64,
    /// Largest accepted `|g_i(t_i) - c_i / (1 + c_i)|`.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            distance: 1e-10,
            utility: 1e-12,
            threshold_match: 1e-9,
            residual: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("distance tolerance", self.distance),
            ("utility tolerance", self.utility),
            ("threshold tolerance", self.threshold_match),
            ("residual tolerance", self.residual),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::OutOfRange {
                    what,
                    value: v,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCase {
    /// `E` first reaches zero inside `(0, R)`.
    Interior,
    /// `E(R) > 0`: transmit everywhere.
    FullTransmit,
    /// `E(R) = 0` and `E > 0` before `R`: transmit on `[0, R)`.
    BoundaryZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponseResult {
    pub threshold: f64,
    pub boundary_case: BoundaryCase,
    pub utility_at_threshold: f64,
}

impl BestResponseResult {
    /// The best response as a strategy. The boundary-zero case differs from
    /// full transmission only at `R`, a null set.
    pub fn strategy(&self) -> Strategy {
        Strategy::threshold(self.threshold).expect("threshold is finite and positive")
    }
}

/// `E[u_i | transmit](d) = (1 + c_i) g_i(d) - c_i`.
pub fn expected_utility_transmit(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    d: f64,
) -> Result<f64> {
    let c = cfg.cost(i)?;
    let g = crate::success_prob::success_probability(profile, cfg, i, d)?;
    Ok(utility_from_success(g, c))
}

pub(crate) fn utility_from_success(g: f64, c: f64) -> f64 {
    (1.0 + c) * g - c
}

/// Best-response cut-off of node `i` against the other strategies of
/// `profile` (node `i`'s own entry is ignored).
pub fn best_response_threshold(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    i: usize,
    tol: &Tolerances,
) -> Result<BestResponseResult> {
    cfg.check_node(i)?;
    cfg.check_profile(profile)?;
    tol.validate()?;

    let r = cfg.radius();
    let c = cfg.costs()[i];
    let dist = cfg.distribution();
    let eu = |d: f64| utility_from_success(success_unchecked(profile, dist, i, d), c);
    let eps = tol.utility;

    let e_r = eu(r);
    if e_r > eps {
        return Ok(BestResponseResult {
            threshold: r,
            boundary_case: BoundaryCase::FullTransmit,
            utility_at_threshold: e_r,
        });
    }

    // Cells between consecutive breakpoints have a fixed set of transmitting
    // opponents, so E is either constant or strictly decreasing on each.
    let mut cuts = vec![0.0];
    cuts.extend(
        opponent_breakpoints(profile, i)
            .into_iter()
            .filter(|&p| p > 0.0 && p < r),
    );
    cuts.push(r);

    let mut prev = cuts[0];
    for &p in &cuts[1..] {
        let e_p = if p == r { e_r } else { eu(p) };
        if e_p > eps {
            prev = p;
            continue;
        }
        if p == r && e_r >= -eps {
            return Ok(BestResponseResult {
                threshold: r,
                boundary_case: BoundaryCase::BoundaryZero,
                utility_at_threshold: e_r,
            });
        }
        if e_p > 0.0 {
            return Ok(BestResponseResult {
                threshold: p,
                boundary_case: BoundaryCase::Interior,
                utility_at_threshold: e_p,
            });
        }
        let t = first_nonpositive(&eu, prev, p, tol.distance * r)?;
        return Ok(BestResponseResult {
            threshold: t,
            boundary_case: BoundaryCase::Interior,
            utility_at_threshold: eu(t),
        });
    }
    unreachable!("E(R) <= eps so some cut reaches zero")
}

/// Bisects a non-increasing `f` with `f(lo) > 0 >= f(hi)` down to adjacent
/// floats and returns the left-most point known to satisfy `f <= 0`.
pub(crate) fn first_nonpositive<F>(f: &F, mut lo: f64, mut hi: f64, max_width: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Ok(hi);
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let width = hi - lo;
    if width <= max_width {
        Ok(hi)
    } else {
        Err(Error::NoConvergence {
            context: "best-response bisection",
            iterations: MAX_BISECTION_STEPS,
            width,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_measure::RadialDistribution;

    fn cfg2(c: [f64; 2]) -> GameConfig {
        GameConfig::new(RadialDistribution::uniform_disk(12.0).unwrap(), c.to_vec()).unwrap()
    }

    #[test]
    fn utility_values() {
        let cfg = cfg2([1.0, 1.0]);
        let p = StrategyProfile::from_thresholds(&[12.0, 12.0]).unwrap();
        assert_eq!(expected_utility_transmit(&p, &cfg, 0, 0.0).unwrap(), 1.0);
        // g(d) = 1 - F(d); F = 0.4 gives g = 0.6 and E = 0.2
        let d = 12.0 * 0.4f64.sqrt();
        assert!((expected_utility_transmit(&p, &cfg, 0, d).unwrap() - 0.2).abs() < 1e-14);
        // g = c/(1+c) = 0.5 gives 0
        let d = 12.0 * 0.5f64.sqrt();
        assert!(expected_utility_transmit(&p, &cfg, 0, d).unwrap().abs() < 1e-14);
        assert!((utility_from_success(0.6, 1.0) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn against_always_transmitter() {
        let cfg = cfg2([1.0, 1.0]);
        let p = StrategyProfile::from_thresholds(&[12.0, 12.0]).unwrap();
        let br = best_response_threshold(&p, &cfg, 0, &Tolerances::default()).unwrap();
        assert_eq!(br.boundary_case, BoundaryCase::Interior);
        // closed form: 1 - (d/12)^2 = 1/2
        assert!((br.threshold - 12.0 * 0.5f64.sqrt()).abs() < 1e-12);
        assert!(br.utility_at_threshold <= 0.0 && br.utility_at_threshold > -1e-12);
    }

    #[test]
    fn against_silent_opponent() {
        for c in [0.1, 1.0, 50.0] {
            let cfg = cfg2([c, 1.0]);
            let p = StrategyProfile::new(vec![Strategy::always(12.0), Strategy::silent()]);
            let br = best_response_threshold(&p, &cfg, 0, &Tolerances::default()).unwrap();
            assert_eq!(br.boundary_case, BoundaryCase::FullTransmit);
            assert_eq!(br.threshold, 12.0);
            assert_eq!(br.utility_at_threshold, 1.0);
        }
    }

    #[test]
    fn against_threshold_six_is_full_transmit() {
        // beyond 6 the opponent is silent and g stays at 0.75, so E(R) = 0.5
        let cfg = cfg2([1.0, 1.0]);
        let p = StrategyProfile::from_thresholds(&[12.0, 6.0]).unwrap();
        let br = best_response_threshold(&p, &cfg, 0, &Tolerances::default()).unwrap();
        assert_eq!(br.boundary_case, BoundaryCase::FullTransmit);
        assert_eq!(br.threshold, 12.0);
        assert!((br.utility_at_threshold - 0.5).abs() < 1e-15);
    }

    #[test]
    fn boundary_zero_case() {
        // g(R) = 1 - F(6) = 0.75 exactly hits c/(1+c) for c = 3; opponent
        // transmits on (0, 6] only so E > 0 before 6 and flat after it.
        // The first zero is at 6: interior, at the flat segment's left edge.
        let cfg = cfg2([3.0, 1.0]);
        let p = StrategyProfile::from_thresholds(&[12.0, 6.0]).unwrap();
        let br = best_response_threshold(&p, &cfg, 0, &Tolerances::default()).unwrap();
        assert_eq!(br.boundary_case, BoundaryCase::Interior);
        assert!((br.threshold - 6.0).abs() < 1e-12);

        // opponent transmits on (6, 12]: g(d) = F(6) + 1 - F(d) beyond 6, so
        // g(R) = 0.25; with c = 1/3, E(R) = 0 and E > 0 before R
        let cfg = cfg2([1.0 / 3.0, 1.0]);
        let p = StrategyProfile::new(vec![
            Strategy::always(12.0),
            Strategy::from_intervals([(6.0, 12.0)]).unwrap(),
        ]);
        let br = best_response_threshold(&p, &cfg, 0, &Tolerances::default()).unwrap();
        assert_eq!(br.boundary_case, BoundaryCase::BoundaryZero);
        assert_eq!(br.threshold, 12.0);
    }

    #[test]
    fn flat_zero_resolves_to_left_edge() {
        // opponent on (0, 6]: g = 1 - F(d) until 6 then 0.75; with c = 3
        // E hits 0 exactly at 6 and stays there.
        let cfg = cfg2([3.0, 1.0]);
        let p = StrategyProfile::new(vec![Strategy::silent(), Strategy::threshold(6.0).unwrap()]);
        let br = best_response_threshold(&p, &cfg, 0, &Tolerances::default()).unwrap();
        assert!(br.threshold <= 6.0 && br.threshold > 6.0 - 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = cfg2([1.0, 1.0]);
        let p = StrategyProfile::from_thresholds(&[12.0, 12.0]).unwrap();
        assert!(best_response_threshold(&p, &cfg, 5, &Tolerances::default()).is_err());
        let bad = Tolerances {
            distance: 0.0,
            ..Tolerances::default()
        };
        assert!(best_response_threshold(&p, &cfg, 0, &bad).is_err());
    }

    #[test]
    fn bisection_helper() {
        let f = |x: f64| 2.0 - x * x;
        let t = first_nonpositive(&f, 0.0, 2.0, 1e-12).unwrap();
        assert!((t - 2f64.sqrt()).abs() < 1e-15);
        assert!(f(t) <= 0.0);
    }
}
