//! Density matrices, the Born rule and SU(2) lifts next to their frame counterparts.

use nalgebra::Vector3;
use qframe::crosscheck::cross_validate;
use qframe::oracle::{born_eta, born_sic, conjugate, density_from_bloch, unitary_from_rotation, validate_density, Lift};
use qframe::process::{MeasurementAxis, Orthogonal3};
use qframe::QubitFrameState;

pub fn main() -> qframe::Result<()> {
    let s = Vector3::new(0.0, 0.6, 0.8);
    let rho = density_from_bloch(&s)?;
    println!("rho = {rho}");
    println!("SIC Born  {:?}", born_sic(&rho)?);
    println!("frame     {:?}", QubitFrameState::from_bloch(&s)?.probs());
    println!("eta(x)    {:?}", born_eta(&rho, &MeasurementAxis::x())?);

    let o = Orthogonal3::about_x(0.7);
    if let Lift::Unitary(u) = unitary_from_rotation(&o) {
        let moved = conjugate(&u, &rho);
        println!("U rho U^dagger valid: {}", validate_density(&moved).is_valid());
    }

    let report = cross_validate(200, qframe::DEFAULT_SEED)?;
    println!("cross-validation max residual {:.2e}, passed {}", report.max_residual(), report.passed());
    for check in &report.closed_forms.checks {
        println!("  {}: {:?}", check.quantity, check.confirmed());
    }
    Ok(())
}
