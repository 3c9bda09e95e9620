mod common;

use common::{arb_distribution, arb_profile, grid, R};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use ragame::{
    estimate_expected_utility, estimate_success_curve, solve_sequential, success_probability,
    GameConfig, RadialDistribution, SimConfig, Tolerances,
};

/// Four standard errors, falling back to the analytic binomial error when
/// the sample shows no variance.
fn within_four_se(analytic: f64, est: f64, se: f64, samples: u64) -> bool {
    let null_se = (analytic * (1.0 - analytic) / samples as f64).sqrt();
    (analytic - est).abs() <= 4.0 * se.max(null_se) + 1e-15
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 12,
        rng_seed: RngSeed::Fixed(0x6d63),
        ..ProptestConfig::default()
    })]

    #[test]
    fn estimates_track_analytic_curve(
        dist in arb_distribution(R),
        profile in arb_profile(2..=5, R, 3),
        seed in any::<u64>(),
    ) {
        let cfg = GameConfig::new(dist, vec![1.0; profile.len()]).unwrap();
        let pts = grid(R, 20);
        let sim = SimConfig::new(40_000, seed);
        let est = estimate_success_curve(&profile, &cfg, 0, &pts, &sim).unwrap();
        for (w, e) in est.windows(2).zip(&est) {
            prop_assert!(w[1].mean <= w[0].mean);
            prop_assert!(e.samples == 40_000);
        }
        for (&d, e) in pts.iter().zip(&est) {
            let g = success_probability(&profile, &cfg, 0, d).unwrap();
            prop_assert!(within_four_se(g, e.mean, e.std_error, sim.samples), "d={} g={} est={:?}", d, g, e);
        }
    }
}

#[test]
fn indifference_at_a_solved_threshold() {
    let cfg = GameConfig::new(
        RadialDistribution::uniform_disk(R).unwrap(),
        vec![3.0, 3.0, 1.0],
    )
    .unwrap();
    let report = solve_sequential(&cfg, &Tolerances::default()).unwrap();
    let profile = report.profile.as_ref().unwrap().to_strategies().unwrap();
    let t = report.thresholds().unwrap()[0];
    let e = estimate_expected_utility(&profile, &cfg, 0, t, &SimConfig::new(200_000, 5)).unwrap();
    assert!(e.mean.abs() <= 4.0 * e.std_error, "{e:?}");
}

#[test]
fn same_seed_same_bits() {
    let cfg = GameConfig::symmetric_uniform(4, 1.0, R).unwrap();
    let profile = ragame::StrategyProfile::from_thresholds(&[12.0, 7.0, 9.0, 3.0]).unwrap();
    let sim = SimConfig::new(25_000, 77);
    let a = estimate_success_curve(&profile, &cfg, 1, &grid(R, 9), &sim).unwrap();
    let b = estimate_success_curve(&profile, &cfg, 1, &grid(R, 9), &sim).unwrap();
    assert_eq!(a, b);
}
