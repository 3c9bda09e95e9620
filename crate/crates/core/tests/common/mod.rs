#![allow(dead_code)]

use proptest::prelude::*;
use ragame::{GameConfig, RadialDistribution, Strategy as NodeStrategy, StrategyProfile};

pub const R: f64 = 12.0;

/// Piecewise-linear CDF with strictly positive slope from random cell
/// weights and cut points.
pub fn piecewise(radius: f64, weights: &[f64], mut cuts: Vec<f64>) -> RadialDistribution {
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.retain(|&c| c > 0.0 && c < radius);
    let w = &weights[..=cuts.len().min(weights.len() - 1)];
    let cuts = &cuts[..w.len() - 1];
    let total: f64 = w.iter().sum();
    let mut knots = vec![(0.0, 0.0)];
    let mut acc = 0.0;
    for (c, wk) in cuts.iter().zip(w) {
        acc += wk / total;
        knots.push((*c, acc));
    }
    knots.push((radius, 1.0));
    RadialDistribution::piecewise_linear(radius, knots).unwrap()
}

pub fn arb_distribution(radius: f64) -> impl Strategy<Value = RadialDistribution> {
    prop_oneof![
        Just(RadialDistribution::uniform_disk(radius).unwrap()),
        (
            prop::collection::vec(0.05..1.0f64, 1..8),
            prop::collection::vec(0.0..radius, 0..7)
        )
            .prop_map(move |(w, c)| piecewise(radius, &w, c)),
    ]
}

pub fn arb_node_strategy(radius: f64, max_intervals: usize) -> impl Strategy<Value = NodeStrategy> {
    prop_oneof![
        1 => Just(NodeStrategy::silent()),
        1 => Just(NodeStrategy::always(radius)),
        2 => (0.0..=radius).prop_map(|t| NodeStrategy::threshold(t).unwrap()),
        6 => prop::collection::vec(0.0..=radius, 1..=max_intervals).prop_flat_map(move |v| {
            prop::collection::vec(0.0..=radius, 2 * v.len())
        })
        .prop_map(|mut pts| {
            pts.sort_by(f64::total_cmp);
            NodeStrategy::from_intervals(pts.chunks(2).map(|w| (w[0], w[1]))).unwrap()
        }),
    ]
}

pub fn arb_profile(
    n: std::ops::RangeInclusive<usize>,
    radius: f64,
    max_intervals: usize,
) -> impl Strategy<Value = StrategyProfile> {
    prop::collection::vec(arb_node_strategy(radius, max_intervals), n)
        .prop_map(StrategyProfile::new)
}

/// Costs from a small menu so classes repeat, mixed with free draws.
pub fn arb_costs(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    let cost = prop_oneof![
        prop::sample::select(vec![0.2, 0.5, 1.0, 2.0, 5.0]),
        0.05..10.0f64,
    ];
    prop::collection::vec(cost, n)
}

pub fn arb_config(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = GameConfig> {
    (arb_distribution(R), arb_costs(n)).prop_map(|(d, c)| GameConfig::new(d, c).unwrap())
}

pub fn grid(radius: f64, points: usize) -> Vec<f64> {
    ragame::success_prob::uniform_grid(radius, points)
}
