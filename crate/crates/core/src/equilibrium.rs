//! Threshold Nash equilibria.
//!
//! Best responses are cut-off strategies, and nodes with equal failure cost
//! share one cut-off at equilibrium, so an equilibrium is described by one
//! threshold per cost class. Classes are ranked by strictly decreasing cost;
//! costlier classes stop transmitting earlier. For a threshold profile the
//! success probability factorizes as
//!
//! ```text
//! g_i(d) = prod_{j != i} (1 - F(min(d, t_j)))
//! ```
//!
//! which lets [`solve_sequential`] fix one class threshold at a time.
//! [`verify_nash`] re-checks any profile against exact best responses and
//! the structural necessary conditions.

use serde::{Deserialize, Serialize};

use crate::best_response::{
    best_response_threshold, first_nonpositive, BestResponseResult, Tolerances,
};
use crate::error::{Error, Result};
use crate::interval_set::IntervalSet;
use crate::strategy::{GameConfig, StrategyProfile};
use crate::success_prob::success_unchecked;

/// Symmetric equilibrium cut-off for `n` nodes of cost `c` uniform over a
/// disk of radius `radius`: `R * sqrt(1 - (c / (1 + c))^(1 / (n - 1)))`.
pub fn solve_symmetric_uniform(n: usize, c: f64, radius: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "cost must be finite and positive, got {c}"
        )));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "radius must be finite and positive, got {radius}"
        )));
    }
    let target = c / (1.0 + c);
    let root = target.powf(1.0 / (n - 1) as f64);
    Ok(radius * (1.0 - root).sqrt())
}

/// Nodes sharing one failure cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostClass {
    pub cost: f64,
    pub members: Vec<usize>,
    /// 0 for the costliest class.
    pub rank: usize,
}

impl CostClass {
    /// Success probability at which a member is indifferent.
    pub fn target(&self) -> f64 {
        self.cost / (1.0 + self.cost)
    }
}

/// Groups nodes by exact cost equality, costliest class first.
pub fn cost_classes(costs: &[f64]) -> Vec<CostClass> {
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&a, &b| costs[b].total_cmp(&costs[a]).then(a.cmp(&b)));
    let mut classes: Vec<CostClass> = Vec::new();
    for i in order {
        match classes.last_mut() {
            Some(cls) if cls.cost == costs[i] => cls.members.push(i),
            _ => classes.push(CostClass {
                cost: costs[i],
                members: vec![i],
                rank: classes.len(),
            }),
        }
    }
    classes
}

/// One cut-off per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdProfile {
    pub thresholds: Vec<f64>,
    /// The cheapest class is a single node transmitting on all of `[0, R]`.
    pub last_class_full: bool,
}

impl ThresholdProfile {
    pub fn to_strategies(&self) -> Result<StrategyProfile> {
        StrategyProfile::from_thresholds(&self.thresholds)
    }

    /// Largest cut-off and the first node attaining it.
    pub fn max(&self) -> Option<(usize, f64)> {
        self.thresholds
            .iter()
            .copied()
            .enumerate()
            .fold(None, |acc, (i, t)| match acc {
                Some((_, best)) if best >= t => acc,
                _ => Some((i, t)),
            })
    }
}

/// Per-class row of an [`EquilibriumReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub rank: usize,
    pub cost: f64,
    pub members: Vec<usize>,
    /// Common cut-off of the members, if they are all threshold strategies
    /// with one shared cut-off.
    pub threshold: Option<f64>,
    pub target: f64,
    /// `g` of the first member at the common cut-off.
    pub success: Option<f64>,
    /// Largest `|g_j(t_j) - target|` over members with a cut-off.
    pub residual: Option<f64>,
}

/// Outcome of a node's best-response re-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCheck {
    pub node: usize,
    pub cutoff: Option<f64>,
    pub best_response: BestResponseResult,
    /// Longest piece of the symmetric difference between the node's transmit
    /// set and its best response.
    pub discrepancy: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

impl Verdict {
    fn new(check: &str, passed: bool, residual: f64, detail: String) -> Self {
        Verdict {
            check: check.to_string(),
            passed,
            residual,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    /// `None` when some node does not play a threshold strategy.
    pub profile: Option<ThresholdProfile>,
    pub classes: Vec<ClassRow>,
    /// `g` at each class cut-off strictly inside `(0, R)`, in rank order.
    pub class_success_values: Vec<f64>,
    pub nodes: Vec<NodeCheck>,
    pub verdicts: Vec<Verdict>,
    pub is_nash: bool,
}

impl EquilibriumReport {
    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn thresholds(&self) -> Option<&[f64]> {
        self.profile.as_ref().map(|p| p.thresholds.as_slice())
    }
}

pub mod checks {
    //! Names of the verdicts in an [`super::EquilibriumReport`].
    pub const BEST_RESPONSE: &str = "best-response";
    pub const MONOTONE: &str = "monotone-profile";
    pub const AT_MOST_ONE_FULL: &str = "at-most-one-full-transmitter";
    pub const INDIFFERENCE: &str = "indifference-at-cutoff";
    pub const EQUAL_COST_EQUAL_CUTOFF: &str = "equal-cost-equal-cutoff";
}

/// Re-checks `profile` against every node's exact best response and the
/// necessary conditions on equilibrium cut-offs.
pub fn verify_nash(
    profile: &StrategyProfile,
    cfg: &GameConfig,
    tol: &Tolerances,
) -> Result<EquilibriumReport> {
    cfg.check_profile(profile)?;
    tol.validate()?;
    let r = cfg.radius();
    let dist = cfg.distribution();
    let match_tol = tol.threshold_match * r;

    let mut nodes = Vec::with_capacity(cfg.n());
    for (i, s) in profile.strategies().iter().enumerate() {
        let br = best_response_threshold(profile, cfg, i, tol)?;
        let diff = s
            .transmit_set()
            .symmetric_difference(br.strategy().transmit_set(), r);
        let discrepancy = longest_piece(&diff);
        nodes.push(NodeCheck {
            node: i,
            cutoff: s.cutoff(),
            best_response: br,
            discrepancy,
            matches: discrepancy <= match_tol,
        });
    }

    let cutoffs: Vec<Option<f64>> = nodes.iter().map(|n| n.cutoff).collect();
    let is_full = |t: f64| t >= r - match_tol;
    let classes = cost_classes(cfg.costs());

    let mut rows = Vec::with_capacity(classes.len());
    for cls in &classes {
        let member_cutoffs: Vec<Option<f64>> = cls.members.iter().map(|&j| cutoffs[j]).collect();
        let threshold = match member_cutoffs.first() {
            Some(Some(t)) if member_cutoffs.iter().all(|c| *c == Some(*t)) => Some(*t),
            _ => None,
        };
        let target = cls.target();
        let residual = cls
            .members
            .iter()
            .filter_map(|&j| {
                cutoffs[j].map(|t| (success_unchecked(profile, dist, j, t) - target).abs())
            })
            .fold(None, |acc: Option<f64>, x| {
                Some(acc.map_or(x, |a| a.max(x)))
            });
        rows.push(ClassRow {
            rank: cls.rank,
            cost: cls.cost,
            members: cls.members.clone(),
            threshold,
            target,
            success: threshold.map(|t| success_unchecked(profile, dist, cls.members[0], t)),
            residual,
        });
    }
    let class_success_values = rows
        .iter()
        .filter(|row| row.threshold.is_some_and(|t| t > 0.0 && !is_full(t)))
        .filter_map(|row| row.success)
        .collect();

    let mut verdicts = Vec::new();

    let mismatched: Vec<usize> = nodes
        .iter()
        .filter(|n| !n.matches)
        .map(|n| n.node)
        .collect();
    let worst = nodes.iter().map(|n| n.discrepancy).fold(0.0, f64::max);
    verdicts.push(Verdict::new(
        checks::BEST_RESPONSE,
        mismatched.is_empty(),
        worst,
        if mismatched.is_empty() {
            "every node plays its best response".into()
        } else {
            format!("nodes {mismatched:?} deviate from their best response")
        },
    ));

    let non_monotone: Vec<usize> = (0..cfg.n()).filter(|&i| cutoffs[i].is_none()).collect();
    verdicts.push(Verdict::new(
        checks::MONOTONE,
        non_monotone.is_empty(),
        non_monotone.len() as f64,
        if non_monotone.is_empty() {
            "all strategies are cut-off strategies".into()
        } else {
            format!("nodes {non_monotone:?} are not cut-off strategies")
        },
    ));

    let full: Vec<usize> = (0..cfg.n())
        .filter(|&i| cutoffs[i].is_some_and(is_full))
        .collect();
    verdicts.push(Verdict::new(
        checks::AT_MOST_ONE_FULL,
        full.len() <= 1,
        full.len() as f64,
        format!("nodes transmitting up to R: {full:?}"),
    ));

    // indifference: g_i(t_i) = c_i/(1+c_i) below R; g_i(R) >= target at R
    let mut worst_residual: f64 = 0.0;
    let mut violators = Vec::new();
    for (i, cutoff) in cutoffs.iter().enumerate() {
        let Some(t) = *cutoff else {
            violators.push(i);
            continue;
        };
        let c = cfg.costs()[i];
        let target = c / (1.0 + c);
        let g = success_unchecked(profile, dist, i, t.min(r));
        let residual = if is_full(t) && full.len() == 1 {
            (target - g).max(0.0)
        } else {
            (g - target).abs()
        };
        worst_residual = worst_residual.max(residual);
        if residual > tol.residual {
            violators.push(i);
        }
    }
    verdicts.push(Verdict::new(
        checks::INDIFFERENCE,
        violators.is_empty(),
        worst_residual,
        if violators.is_empty() {
            "every cut-off satisfies its indifference condition".into()
        } else {
            format!("nodes {violators:?} violate the indifference condition")
        },
    ));

    let split: Vec<f64> = rows
        .iter()
        .filter(|row| row.threshold.is_none())
        .map(|row| row.cost)
        .collect();
    verdicts.push(Verdict::new(
        checks::EQUAL_COST_EQUAL_CUTOFF,
        split.is_empty(),
        split.len() as f64,
        if split.is_empty() {
            "equal-cost nodes share one cut-off".into()
        } else {
            format!("cost classes {split:?} do not share one cut-off")
        },
    ));

    let is_nash = verdicts.iter().all(|v| v.passed);
    let profile = profile.cutoffs().map(|thresholds| {
        let last_class_full = classes.last().is_some_and(|cls| {
            cls.members.len() == 1 && thresholds[cls.members[0]] >= r - match_tol
        });
        ThresholdProfile {
            thresholds,
            last_class_full,
        }
    });
    Ok(EquilibriumReport {
        profile,
        classes: rows,
        class_success_values,
        nodes,
        verdicts,
        is_nash,
    })
}

fn longest_piece(set: &IntervalSet) -> f64 {
    set.intervals().iter().map(|i| i.len()).fold(0.0, f64::max)
}

/// Solves class thresholds in rank order and verifies the resulting profile.
///
/// For class `k` with `m_k` members, every member at its cut-off `t` faces
/// the costlier classes (already stopped, contributing a fixed product `P`)
/// and `e_k = m_k - 1 + sum of later class sizes` opponents still
/// transmitting, so `t` solves `P (1 - F(t))^e_k = c_k / (1 + c_k)`. A
/// single-node cheapest class has `e_k = 0` and transmits everywhere.
///
/// Requires a strictly increasing CDF.
pub fn solve_sequential(cfg: &GameConfig, tol: &Tolerances) -> Result<EquilibriumReport> {
    tol.validate()?;
    let dist = cfg.distribution();
    if !dist.is_strictly_increasing() {
        return Err(Error::InvalidDistribution(
            "sequential solve needs a strictly increasing CDF".into(),
        ));
    }
    let r = cfg.radius();
    let classes = cost_classes(cfg.costs());
    let mut thresholds = vec![0.0; cfg.n()];
    let mut last_class_full = false;

    let mut prefix = 1.0;
    let mut left = 0.0;
    let mut remaining = cfg.n();
    for cls in &classes {
        let k = cls.members.len();
        remaining -= k;
        let exponent = (k - 1 + remaining) as i32;
        let target = cls.target();

        let t = if exponent == 0 {
            if prefix < target {
                return Err(Error::NoBracket {
                    context: "cheapest singleton class",
                    lo: left,
                    hi: r,
                    f_lo: prefix - target,
                    f_hi: prefix - target,
                });
            }
            last_class_full = true;
            r
        } else {
            let h = |t: f64| prefix * (1.0 - dist.cdf_unchecked(t)).powi(exponent) - target;
            let (h_lo, h_hi) = (h(left), h(r));
            if !(h_lo > 0.0 && h_hi <= 0.0) {
                return Err(Error::NoBracket {
                    context: "cost-class threshold",
                    lo: left,
                    hi: r,
                    f_lo: h_lo,
                    f_hi: h_hi,
                });
            }
            first_nonpositive(&h, left, r, tol.distance * r)?
        };
        for &j in &cls.members {
            thresholds[j] = t;
        }
        prefix *= (1.0 - dist.cdf_unchecked(t)).powi(k as i32);
        left = t;
    }

    let solved = ThresholdProfile {
        thresholds,
        last_class_full,
    };
    let mut report = verify_nash(&solved.to_strategies()?, cfg, tol)?;
    report.profile = Some(solved);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DampedOutcome {
    pub thresholds: Vec<f64>,
    pub rounds: usize,
}

/// Simultaneous damped best-response iteration over threshold profiles:
/// `t <- (1 - damping) t + damping BR(t)` until every `|BR_i(t) - t_i|` is
/// at most `conv_tol * R`.
pub fn damped_best_response(
    cfg: &GameConfig,
    initial: &[f64],
    damping: f64,
    conv_tol: f64,
    max_rounds: usize,
    tol: &Tolerances,
) -> Result<DampedOutcome> {
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::OutOfRange {
            what: "damping",
            value: damping,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let r = cfg.radius();
    let mut t = initial.to_vec();
    for round in 0..max_rounds {
        let profile = StrategyProfile::from_thresholds(&t)?;
        cfg.check_profile(&profile)?;
        let br: Vec<f64> = (0..cfg.n())
            .map(|i| best_response_threshold(&profile, cfg, i, tol).map(|b| b.threshold))
            .collect::<Result<_>>()?;
        let gap = t
            .iter()
            .zip(&br)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if gap <= conv_tol * r {
            return Ok(DampedOutcome {
                thresholds: br,
                rounds: round,
            });
        }
        for (ti, bi) in t.iter_mut().zip(&br) {
            *ti = (1.0 - damping) * *ti + damping * bi;
        }
    }
    Err(Error::NoConvergence {
        context: "damped best-response iteration",
        iterations: max_rounds,
        width: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_measure::RadialDistribution;
    use crate::strategy::Strategy;

    fn uniform_cfg(costs: &[f64]) -> GameConfig {
        GameConfig::new(
            RadialDistribution::uniform_disk(12.0).unwrap(),
            costs.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn symmetric_closed_form() {
        let t = solve_symmetric_uniform(2, 1.0, 12.0).unwrap();
        assert!((t - 8.485281374238571).abs() < 1e-12);
        let t3 = solve_symmetric_uniform(3, 1.0, 12.0).unwrap();
        assert!((t3 - 12.0 * (1.0 - 0.5f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!((t3 - 6.494353201754363).abs() < 1e-12);
        assert!(solve_symmetric_uniform(1, 1.0, 12.0).is_err());
        assert!(solve_symmetric_uniform(2, 0.0, 12.0).is_err());
        assert!(solve_symmetric_uniform(2, -1.0, 12.0).is_err());
    }

    #[test]
    fn symmetric_monotone_in_cost() {
        let mut prev = 12.0;
        for c in [1e-9, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3] {
            let t = solve_symmetric_uniform(4, c, 12.0).unwrap();
            assert!(t < prev && t > 0.0);
            prev = t;
        }
        assert!(solve_symmetric_uniform(4, 1e-12, 12.0).unwrap() > 11.99);
    }

    #[test]
    fn classes_group_by_exact_cost() {
        let cls = cost_classes(&[1.0, 3.0, 2.0, 3.0, 1.0]);
        let summary: Vec<(f64, Vec<usize>, usize)> = cls
            .into_iter()
            .map(|c| (c.cost, c.members, c.rank))
            .collect();
        assert_eq!(
            summary,
            vec![
                (3.0, vec![1, 3], 0),
                (2.0, vec![2], 1),
                (1.0, vec![0, 4], 2)
            ]
        );
    }

    #[test]
    fn sequential_two_classes() {
        let cfg = uniform_cfg(&[3.0, 1.0]);
        let rep = solve_sequential(&cfg, &Tolerances::default()).unwrap();
        let p = rep.profile.as_ref().unwrap();
        assert!((p.thresholds[0] - 6.0).abs() < 1e-9);
        assert_eq!(p.thresholds[1], 12.0);
        assert!(p.last_class_full);
        assert!(rep.is_nash, "{rep:#?}");
    }

    #[test]
    fn sequential_three_nodes() {
        let cfg = uniform_cfg(&[3.0, 3.0, 1.0]);
        let rep = solve_sequential(&cfg, &Tolerances::default()).unwrap();
        let t = rep.thresholds().unwrap();
        let want = 12.0 * (1.0 - 3f64.sqrt() / 2.0).sqrt();
        assert!((t[0] - want).abs() < 1e-9);
        assert_eq!(t[0], t[1]);
        assert_eq!(t[2], 12.0);
        assert!(rep.is_nash);
        assert!(rep.classes[0].residual.unwrap() < 1e-10);
    }

    #[test]
    fn sequential_rejects_flat_cdf() {
        let dist = RadialDistribution::piecewise_linear(
            10.0,
            vec![(0.0, 0.0), (4.0, 0.5), (6.0, 0.5), (10.0, 1.0)],
        )
        .unwrap();
        let cfg = GameConfig::new(dist, vec![1.0, 2.0]).unwrap();
        assert!(solve_sequential(&cfg, &Tolerances::default()).is_err());
    }

    #[test]
    fn both_always_transmit_is_not_nash() {
        let cfg = uniform_cfg(&[1.0, 1.0]);
        let p = StrategyProfile::from_thresholds(&[12.0, 12.0]).unwrap();
        let rep = verify_nash(&p, &cfg, &Tolerances::default()).unwrap();
        assert!(!rep.is_nash);
        assert!(!rep.verdict(checks::AT_MOST_ONE_FULL).unwrap().passed);
        assert!(!rep.verdict(checks::BEST_RESPONSE).unwrap().passed);
        assert!((rep.nodes[0].best_response.threshold - 8.485281374238571).abs() < 1e-9);
    }

    #[test]
    fn perturbed_symmetric_is_not_nash() {
        let t = solve_symmetric_uniform(3, 1.0, 12.0).unwrap();
        let cfg = uniform_cfg(&[1.0; 3]);
        let ok = verify_nash(
            &StrategyProfile::from_thresholds(&[t; 3]).unwrap(),
            &cfg,
            &Tolerances::default(),
        )
        .unwrap();
        assert!(ok.is_nash, "{ok:#?}");

        let p = StrategyProfile::from_thresholds(&[t + 0.5; 3]).unwrap();
        let rep = verify_nash(&p, &cfg, &Tolerances::default()).unwrap();
        assert!(!rep.is_nash);
        let ind = rep.verdict(checks::INDIFFERENCE).unwrap();
        assert!(!ind.passed);
        let g = (1.0 - ((t + 0.5) / 12.0).powi(2)).powi(2);
        assert!((ind.residual - (g - 0.5).abs()).abs() < 1e-12);
    }

    #[test]
    fn non_threshold_profile_reports_monotone_failure() {
        let cfg = uniform_cfg(&[1.0, 1.0]);
        let p = StrategyProfile::new(vec![
            Strategy::from_intervals([(2.0, 5.0)]).unwrap(),
            Strategy::threshold(8.0).unwrap(),
        ]);
        let rep = verify_nash(&p, &cfg, &Tolerances::default()).unwrap();
        assert!(!rep.is_nash);
        assert!(rep.profile.is_none());
        assert!(!rep.verdict(checks::MONOTONE).unwrap().passed);
    }

    #[test]
    fn split_class_fails_equal_cutoff_check() {
        let cfg = uniform_cfg(&[1.0, 1.0, 1.0]);
        let p = StrategyProfile::from_thresholds(&[5.0, 6.0, 6.0]).unwrap();
        let rep = verify_nash(&p, &cfg, &Tolerances::default()).unwrap();
        assert!(!rep.verdict(checks::EQUAL_COST_EQUAL_CUTOFF).unwrap().passed);
        assert!(!rep.is_nash);
    }

    #[test]
    fn damped_iteration_agrees_with_sequential() {
        for costs in [vec![3.0, 1.0], vec![3.0, 3.0, 1.0], vec![1.0, 1.0, 1.0]] {
            let cfg = uniform_cfg(&costs);
            let rep = solve_sequential(&cfg, &Tolerances::default()).unwrap();
            let out = damped_best_response(
                &cfg,
                &vec![12.0; costs.len()],
                0.5,
                1e-9,
                10_000,
                &Tolerances::default(),
            )
            .unwrap();
            for (a, b) in out.thresholds.iter().zip(rep.thresholds().unwrap()) {
                assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
            }
        }
    }
}
