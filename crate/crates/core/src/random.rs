//! Seeded generators for test states, rotations and settings.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bell::ChshSettings;
use crate::process::{MeasurementAxis, Orthogonal3};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-9 {
            return v / norm;
        }
    }
}

/// Uniform point in the closed unit ball.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    random_unit_vector(rng) * rng.random::<f64>().cbrt()
}

/// Proper rotation with uniform axis and angle uniform in `[0, 2π)`.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Orthogonal3 {
    let axis = random_unit_vector(rng);
    let angle = rng.random_range(0.0..2.0 * PI);
    Orthogonal3::from_scaled_axis(&(axis * angle))
}

/// A random rotation composed with `−I` half of the time.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R) -> Orthogonal3 {
    let r = random_rotation(rng);
    if rng.random::<bool>() {
        Orthogonal3::new(-r.matrix()).expect("negated rotation is orthogonal")
    } else {
        r
    }
}

/// Four independent random proper rotations and the `ẑ` axis.
pub fn random_settings<R: Rng + ?Sized>(rng: &mut R) -> ChshSettings {
    ChshSettings::new(
        [random_rotation(rng), random_rotation(rng)],
        [random_rotation(rng), random_rotation(rng)],
        MeasurementAxis::z(),
    )
}
