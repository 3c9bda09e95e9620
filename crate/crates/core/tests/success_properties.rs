mod common;

use common::{arb_distribution, arb_profile, grid, R};
use proptest::prelude::*;
use ragame::{
    success_probability, GameConfig, IntervalSet, Strategy as NodeStrategy, StrategyProfile,
};

fn curve(profile: &StrategyProfile, cfg: &GameConfig, pts: &[f64]) -> Vec<f64> {
    pts.iter()
        .map(|&d| success_probability(profile, cfg, 0, d).unwrap())
        .collect()
}

fn opponents_transmit_on(profile: &StrategyProfile, a: f64, b: f64) -> (bool, bool) {
    let cell = IntervalSet::new([(a, b)]).unwrap();
    let mut any = false;
    let mut covered = false;
    for s in profile.opponents(0) {
        let hit = s.transmit_set().intersection(&cell);
        any |= hit.length() > 0.0;
        covered |= hit == cell;
    }
    (any, covered)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structure_on_fine_grid(
        dist in arb_distribution(R),
        profile in arb_profile(2..=6, R, 4),
    ) {
        let n = profile.len();
        let cfg = GameConfig::new(dist.clone(), vec![1.0; n]).unwrap();
        let pts = grid(R, 1000);
        let g = curve(&profile, &cfg, &pts);
        let k = dist.density_sup().unwrap();

        prop_assert_eq!(g[0], 1.0);
        for (w, d) in g.windows(2).zip(pts.windows(2)) {
            prop_assert!(w[1] <= w[0]);
            prop_assert!(w[0] - w[1] <= (n - 1) as f64 * k * (d[1] - d[0]) + 1e-12);
            let (any, covered) = opponents_transmit_on(&profile, d[0], d[1]);
            if !any {
                prop_assert!((w[0] - w[1]).abs() <= 1e-12);
            }
            if covered {
                prop_assert!(w[1] < w[0], "flat on a transmit cell at {:?}", d);
            }
        }
        for (&d, &gd) in pts.iter().zip(&g) {
            prop_assert!(gd >= (1.0 - dist.cdf(d).unwrap()).powi(n as i32 - 1) - 1e-12);
        }
        let anyone = profile.opponents(0).any(|s| s.transmit_probability(&dist) > 0.0);
        if anyone {
            prop_assert!(*g.last().unwrap() < 1.0);
        }
    }

    #[test]
    fn always_on_opponent_caps_success(
        dist in arb_distribution(5.0),
        profile in arb_profile(3..=5, 5.0, 3),
    ) {
        let profile = profile.with(1, NodeStrategy::always(5.0));
        let cfg = GameConfig::new(dist.clone(), vec![1.0; profile.len()]).unwrap();
        for d in grid(5.0, 200) {
            let g = success_probability(&profile, &cfg, 0, d).unwrap();
            prop_assert!(g <= 1.0 - dist.cdf(d).unwrap() + 1e-12);
        }
    }

    #[test]
    fn threshold_profiles_factorize(
        dist in arb_distribution(R),
        t in prop::collection::vec(0.0..=R, 2..=6),
    ) {
        let profile = StrategyProfile::from_thresholds(&t).unwrap();
        let cfg = GameConfig::new(dist.clone(), vec![1.0; t.len()]).unwrap();
        for d in grid(R, 60) {
            let want: f64 = t[1..].iter().map(|&tj| 1.0 - dist.cdf(d.min(tj)).unwrap()).product();
            let got = success_probability(&profile, &cfg, 0, d).unwrap();
            prop_assert!((got - want).abs() < 1e-12);
        }
    }
}
