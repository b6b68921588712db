mod common;

use common::max_diff;
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use qframe::frame::{bit_averages, bloch_from_state, state_from_bloch, tetra_vectors};
use qframe::process::{
    affine_channel_process, apply_process, compose, direct_readout, eta_measurement, general_measurement_process,
    invert_rotation, rotation_process, sphere_directions, AffineChannel, GeneralMeasurement, MeasurementAxis,
    Orthogonal3, QuasiStochasticMatrix,
};
use qframe::random::{random_bloch, random_orthogonal, random_rotation, random_unit_vector, rng_from_seed};
use rand::Rng;

fn bloch() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(x, y, z)| Vector3::new(x, y, z))
        .prop_map(|v| if v.norm() > 1.0 { v / v.norm() } else { v })
}

fn unit() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-3)
        .prop_map(|(x, y, z)| Vector3::new(x, y, z).normalize())
}

fn column_sums_ok(m: &QuasiStochasticMatrix) -> bool {
    m.entries().row_sum().iter().all(|c| (c - 1.0).abs() <= 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bloch_roundtrip(s in bloch()) {
        let p = state_from_bloch(&s).unwrap();
        prop_assert!((bloch_from_state(&p) - s).amax() <= 1e-12);
        prop_assert!(p.probs().iter().all(|&x| x >= 0.25 * (1.0 - s.norm()) - 1e-15));
        let avg = bit_averages(&p).as_vector();
        prop_assert!((avg * 3f64.sqrt() - s).amax() <= 1e-12);
    }

    #[test]
    fn rotation_acts_on_bloch(s in bloch(), axis in unit(), angle in 0.0..std::f64::consts::TAU, flip in any::<bool>()) {
        let mut o = Orthogonal3::from_axis_angle(&axis, angle).unwrap();
        if flip {
            o = Orthogonal3::new(-o.matrix()).unwrap();
        }
        let m = rotation_process(&o);
        prop_assert!(column_sums_ok(&m));
        prop_assert!(m.is_quasi_bistochastic(1e-12));
        let out = apply_process(&m, &state_from_bloch(&s).unwrap()).unwrap();
        prop_assert!(max_diff(&out, state_from_bloch(&o.apply(&s)).unwrap().probs()) <= 1e-12);
    }

    #[test]
    fn eta_reproduces_pauli_measurement(s in bloch(), axis in unit()) {
        let axis = MeasurementAxis::new(axis).unwrap();
        let m = eta_measurement(&axis);
        prop_assert!(column_sums_ok(&m));
        let out = apply_process(&m, &state_from_bloch(&s).unwrap()).unwrap();
        for (k, b) in [1.0, -1.0].into_iter().enumerate() {
            prop_assert!((out[k] - 0.5 * (1.0 + b * axis.vector().dot(&s))).abs() <= 1e-12);
            prop_assert!(out[k] >= -1e-12);
        }
    }
}

#[test]
fn tetra_gram_and_sum() {
    let n = tetra_vectors();
    let sum = n.iter().fold(Vector3::zeros(), |acc, v| acc + v);
    assert!(sum.amax() <= 1e-15);
    for i in 0..4 {
        for j in 0..4 {
            let expected = if i == j { 1.0 } else { -1.0 / 3.0 };
            assert!((n[i].dot(&n[j]) - expected).abs() <= 1e-15);
        }
    }
}

#[test]
fn every_constructor_is_column_stochastic() {
    let mut rng = rng_from_seed(41);
    for _ in 0..1000 {
        let o = random_orthogonal(&mut rng);
        assert!(column_sums_ok(&rotation_process(&o)));
        assert!(column_sums_ok(&eta_measurement(&MeasurementAxis::new(random_unit_vector(&mut rng)).unwrap())));

        let shrink = rng.random::<f64>();
        let channel = AffineChannel::new(o.matrix() * shrink, random_bloch(&mut rng) * (1.0 - shrink)).unwrap();
        assert!(column_sums_ok(&affine_channel_process(&channel)));

        let a = random_unit_vector(&mut rng) * rng.random::<f64>();
        let gm = GeneralMeasurement::new(1, vec![a, -a], tetra_vectors()).unwrap();
        assert!(column_sums_ok(&general_measurement_process(&gm)));
    }
    assert!(column_sums_ok(&direct_readout()));
}

#[test]
fn inverse_composes_to_identity() {
    let mut rng = rng_from_seed(42);
    let id = QuasiStochasticMatrix::identity(4);
    for _ in 0..100 {
        let s = rotation_process(&random_rotation(&mut rng));
        let inv = invert_rotation(&s).unwrap();
        assert!(compose(&inv, &s).unwrap().max_abs_diff(&id) <= 1e-12);
        assert!(compose(&s, &inv).unwrap().max_abs_diff(&id) <= 1e-12);
    }
}

#[test]
fn eta_always_has_a_negative_entry() {
    for axis in sphere_directions(100) {
        let m = eta_measurement(&MeasurementAxis::new(axis).unwrap());
        assert!(m.min_entry() <= -0.25, "axis {axis:?}: min entry {}", m.min_entry());
    }
}

#[test]
fn affine_rejects_ball_expansion() {
    let err = AffineChannel::new(Matrix3::identity() * 1.1, Vector3::zeros()).unwrap_err();
    assert_eq!(err.name(), "BallNotPreserved");
}
