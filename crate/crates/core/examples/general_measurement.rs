//! The general 2^N-outcome measurement and its closed-form outcome law.

use nalgebra::Vector3;
use qframe::frame::tetra_vectors;
use qframe::process::{apply_process, general_measurement_process, GeneralMeasurement};
use qframe::QubitFrameState;

pub fn main() -> qframe::Result<()> {
    // A noisy three-axis measurement with four outcomes.
    let m = vec![
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(-1.0, 0.0, 0.0),
        Vector3::new(0.0, 0.8, 0.0),
        Vector3::new(0.0, -0.8, 0.0),
    ];
    let w = tetra_vectors().map(|n| n * 0.5);
    let gm = GeneralMeasurement::new(2, m, w)?;
    let process = general_measurement_process(&gm);

    let s = Vector3::new(0.2, 0.5, -0.1);
    let contracted = apply_process(&process, &QubitFrameState::from_bloch(&s)?)?;
    let closed = gm.outcome_law(&s);
    for (b, (x, y)) in contracted.iter().zip(&closed).enumerate() {
        println!("outcome {b}: contraction {x:.12}, closed form {y:.12}");
    }
    Ok(())
}
