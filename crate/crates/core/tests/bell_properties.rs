use std::f64::consts::SQRT_2;

use qframe::bell::{
    chsh_value, estimate_chsh, eta_behavior, eta_behavior_closed_form, fine_joint_readout, lhv_membership,
    tsirelson_settings, CHSH_TOL, MODEL_RESIDUAL_TOL,
};
use qframe::random::{random_settings, rng_from_seed};
use rayon::prelude::*;

#[test]
fn eta_behaviors_do_not_signal() {
    let mut rng = rng_from_seed(100);
    for _ in 0..1000 {
        let b = eta_behavior(&random_settings(&mut rng)).unwrap();
        assert!(b.signaling_residual() <= 1e-12);
    }
}

#[test]
fn tsirelson_envelope_on_random_settings() {
    let worst = (0..100_000u64)
        .into_par_iter()
        .map(|k| {
            let s = random_settings(&mut rng_from_seed(1_000_000 + k));
            chsh_value(&eta_behavior_closed_form(&s)).unwrap().max_variant
        })
        .reduce(|| f64::MIN, f64::max);
    assert!(worst <= 2.0 * SQRT_2 + 1e-9, "worst {worst}");
    assert!(worst > 2.0);
}

#[test]
fn closed_form_matches_contraction() {
    let mut rng = rng_from_seed(101);
    for _ in 0..500 {
        let s = random_settings(&mut rng);
        let brute = eta_behavior(&s).unwrap();
        let closed = eta_behavior_closed_form(&s);
        for i in 0..2 {
            for j in 0..2 {
                for c in 0..4 {
                    assert!((brute.get(i, j)[c] - closed.get(i, j)[c]).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn readout_always_admits_a_joint() {
    let mut rng = rng_from_seed(102);
    for _ in 0..1000 {
        let s = random_settings(&mut rng);
        let report = fine_joint_readout(&s).unwrap().report(&s);
        assert!(report.holds(1e-12), "{report:?}");
    }
}

#[test]
fn locality_verdict_matches_chsh() {
    let mut rng = rng_from_seed(103);
    let (mut local, mut nonlocal) = (0, 0);
    for _ in 0..1000 {
        let b = eta_behavior(&random_settings(&mut rng)).unwrap();
        let m = lhv_membership(&b).unwrap();
        let max = chsh_value(&b).unwrap().max_variant;
        assert_eq!(m.is_local, max <= 2.0 + CHSH_TOL);
        if m.is_local {
            local += 1;
            assert!(m.model.unwrap().residual(&b) <= MODEL_RESIDUAL_TOL);
        } else {
            nonlocal += 1;
            assert!(m.witness.unwrap().1 > 2.0);
        }
    }
    assert!(local > 0 && nonlocal > 0, "{local} local, {nonlocal} non-local");
}

#[test]
fn estimator_spread_matches_binomial() {
    let b = eta_behavior(&tsirelson_settings()).unwrap();
    let exact = b.correlators();
    let n = 4000;
    let seeds = 100;
    for i in 0..2 {
        for j in 0..2 {
            let estimates: Vec<f64> = (0..seeds)
                .map(|seed| estimate_chsh(&b, n, seed).unwrap().correlators[i][j].value)
                .collect();
            let mean = estimates.iter().sum::<f64>() / seeds as f64;
            let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (seeds - 1) as f64;
            let predicted = ((1.0 - exact[i][j].powi(2)) / n as f64).sqrt();
            let ratio = var.sqrt() / predicted;
            assert!((0.5..=2.0).contains(&ratio), "E{}{}: ratio {ratio}", i + 1, j + 1);
            assert!((mean - exact[i][j]).abs() < 4.0 * predicted / (seeds as f64).sqrt());
        }
    }
}
