//! Frame contraction against the Born rule on seeded random inputs.

use serde::Serialize;

use crate::closed_forms::{closed_form_report, ClosedFormReport};
use crate::error::Result;
use crate::frame::QubitFrameState;
use crate::oracle::{
    born_eta, born_sic, conjugate, density_from_bloch, eta_projector, frame_state_of, random_density,
    two_qubit_frame_state_of, unitary_from_rotation, ComplexMatrix, Lift,
};
use crate::process::{apply_process, compose, eta_measurement, rotation_process, MeasurementAxis};
use crate::random::{random_bloch, random_orthogonal, random_rotation, random_unit_vector, rng_from_seed};
use crate::two_qubit::apply_local;

/// Agreement required between the frame and Hilbert sides.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub seed: u64,
    pub cases: usize,
    pub tolerance: f64,
    /// `η(â)` on one qubit against `tr(ρ ½(I + b â·σ))`.
    pub single_qubit_eta: f64,
    /// Frame state against the SIC Born probabilities.
    pub single_qubit_sic: f64,
    /// Rotated `η ⊗ η` on two qubits against the conjugated projector pair.
    pub two_qubit_eta: f64,
    /// `ρ(O s)` against `U ρ(s) U†` for proper `O`.
    pub unitary_lift: f64,
    /// Improper `O`, compared at the frame level only.
    pub improper_frame: f64,
    pub closed_forms: ClosedFormReport,
}

impl CrossCheckReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.single_qubit_eta,
            self.single_qubit_sic,
            self.two_qubit_eta,
            self.unitary_lift,
            self.improper_frame,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tolerance && self.closed_forms.checks.iter().all(|c| c.confirmed().len() == 1)
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn unitary(lift: Lift) -> ComplexMatrix {
    match lift {
        Lift::Unitary(u) => u,
        Lift::Antiunitary => unreachable!("proper rotations always lift"),
    }
}

/// Largest single-qubit `η` discrepancy over `cases` random `(ρ, â)`.
pub fn single_qubit_eta_residual(cases: usize, seed: u64) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0_f64;
    for k in 0..cases {
        let rho = random_density(2, seed.wrapping_add(k as u64));
        let axis = MeasurementAxis::new(random_unit_vector(&mut rng))?;
        let frame = apply_process(&eta_measurement(&axis), &frame_state_of(&rho)?)?;
        worst = worst.max(max_diff(&frame, &born_eta(&rho, &axis)?));
    }
    Ok(worst)
}

/// Largest two-qubit `q(ab)` discrepancy over random `ρ₄`, `O_A`, `O_B`, `â`.
pub fn two_qubit_eta_residual(cases: usize, seed: u64) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0_f64;
    for k in 0..cases {
        let rho = random_density(4, seed.wrapping_add(k as u64));
        let (oa, ob) = (random_rotation(&mut rng), random_rotation(&mut rng));
        let axis = MeasurementAxis::new(random_unit_vector(&mut rng))?;
        let eta = eta_measurement(&axis);
        let frame = apply_local(
            &compose(&eta, &rotation_process(&oa))?,
            &compose(&eta, &rotation_process(&ob))?,
            &two_qubit_frame_state_of(&rho)?,
        )?;
        let u = unitary(unitary_from_rotation(&oa)).kronecker(&unitary(unitary_from_rotation(&ob)));
        for (x, a) in [1.0, -1.0].into_iter().enumerate() {
            for (y, b) in [1.0, -1.0].into_iter().enumerate() {
                let effect = eta_projector(&axis, a).kronecker(&eta_projector(&axis, b));
                let born = (&rho * u.adjoint() * effect * &u).trace().re;
                worst = worst.max((frame.get(x, y) - born).abs());
            }
        }
    }
    Ok(worst)
}

/// Runs every frame/Hilbert comparison plus the closed-form report.
pub fn cross_validate(cases: usize, seed: u64) -> Result<CrossCheckReport> {
    let mut rng = rng_from_seed(seed ^ 0x5eed);
    let mut sic = 0.0_f64;
    let mut lift = 0.0_f64;
    let mut improper = 0.0_f64;
    for k in 0..cases {
        let rho = random_density(2, seed.wrapping_add(k as u64));
        sic = sic.max(max_diff(frame_state_of(&rho)?.probs(), &born_sic(&rho)?));

        let s = random_bloch(&mut rng);
        let o = random_rotation(&mut rng);
        let u = unitary(unitary_from_rotation(&o));
        let lhs = density_from_bloch(&o.apply(&s))?;
        let rhs = conjugate(&u, &density_from_bloch(&s)?);
        lift = lift.max((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max));

        let o = random_orthogonal(&mut rng);
        let evolved = apply_process(&rotation_process(&o), &QubitFrameState::from_bloch(&s)?)?;
        improper = improper.max(max_diff(&evolved, QubitFrameState::from_bloch(&o.apply(&s))?.probs()));
    }
    Ok(CrossCheckReport {
        seed,
        cases,
        tolerance: ORACLE_TOL,
        single_qubit_eta: single_qubit_eta_residual(cases, seed)?,
        single_qubit_sic: sic,
        two_qubit_eta: two_qubit_eta_residual(cases, seed)?,
        unitary_lift: lift,
        improper_frame: improper,
        closed_forms: closed_form_report(cases.min(200), seed),
    })
}
