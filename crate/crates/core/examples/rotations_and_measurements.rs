//! Rotation processes, their inverses, and the eta and readout measurements.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Vector3;
use qframe::process::{
    apply_process, compose, direct_readout, eta_measurement, invert_rotation, negativity, rotation_process,
    MeasurementAxis, Orthogonal3, QuasiStochasticMatrix,
};
use qframe::QubitFrameState;

fn print_matrix(name: &str, m: &QuasiStochasticMatrix) {
    println!("{name}:");
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:8.5}")).collect();
        println!("  [{}]", cells.join(" "));
    }
}

pub fn main() -> qframe::Result<()> {
    let quarter = Orthogonal3::about_z(FRAC_PI_2);
    let s = rotation_process(&quarter);
    print_matrix("quarter turn about z", &s);
    println!("min entry {:.5}, bistochastic: {}", s.min_entry(), s.is_quasi_bistochastic(1e-12));

    let state = QubitFrameState::from_bloch(&Vector3::x())?;
    let turned = QubitFrameState::from_slice(&apply_process(&s, &state)?)?;
    println!("x rotated to {:?}", turned.bloch().as_slice());

    let back = compose(&invert_rotation(&s)?, &s)?;
    println!("S^-1 S deviates from identity by {:.2e}", back.max_abs_diff(&QuasiStochasticMatrix::identity(4)));

    let eta = eta_measurement(&MeasurementAxis::z());
    print_matrix("eta along z", &eta);
    println!("eta on |0>: {:?}", apply_process(&eta, &QubitFrameState::from_bloch(&Vector3::z())?)?);
    println!("eta negativity: {:?}", negativity(&eta));
    println!("readout negativity: {:?}", negativity(&direct_readout()));
    Ok(())
}
