//! Hilbert-space reference implementation used to cross-check the frame side.
//!
//! Nothing in here calls into the frame contraction code except the explicit
//! conversion helpers at the bottom, which build frame states from density
//! matrices for comparisons.

mod jacobi;

pub use jacobi::{hermitian_eigenvalues, symmetric_eigen, SymmetricEigen, JACOBI_MAX_SWEEPS, JACOBI_TOL};

use nalgebra::{Complex, DMatrix, Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::frame::{tetra_vectors, QubitFrameState, FRAME_TOL};
use crate::process::{MeasurementAxis, Orthogonal3};
use crate::two_qubit::{CorrelationMatrix, TwoQubitFrameState, TwoQubitParams};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Eigenvalues below `−EIGEN_TOL` make a density matrix invalid.
pub const EIGEN_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// `[σ_x, σ_y, σ_z]`
pub fn pauli() -> [ComplexMatrix; 3] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    [
        ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        ComplexMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

/// `v·σ`
pub fn pauli_dot(v: &Vector3<f64>) -> ComplexMatrix {
    let [sx, sy, sz] = pauli();
    sx * c(v.x, 0.0) + sy * c(v.y, 0.0) + sz * c(v.z, 0.0)
}

fn real_trace(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

/// `ρ = ½(I + s·σ)`
pub fn density_from_bloch(s: &Vector3<f64>) -> Result<ComplexMatrix> {
    let norm = s.norm();
    if norm > 1.0 + FRAME_TOL {
        return Err(Error::BlochOutOfBall { norm });
    }
    Ok((identity(2) + pauli_dot(s)) * c(0.5, 0.0))
}

/// `ρ = ¼(I⊗I + s_A·σ⊗I + I⊗s_B·σ + Σ T_ij σ_i⊗σ_j)`, with its validity report.
pub fn density_from_params(
    s_a: &Vector3<f64>,
    s_b: &Vector3<f64>,
    t: &Matrix3<f64>,
) -> (ComplexMatrix, DensityReport) {
    let p = pauli();
    let id = identity(2);
    let mut rho = identity(4) + pauli_dot(s_a).kronecker(&id) + id.kronecker(&pauli_dot(s_b));
    for i in 0..3 {
        for j in 0..3 {
            rho += p[i].kronecker(&p[j]) * c(t[(i, j)], 0.0);
        }
    }
    rho *= c(0.25, 0.0);
    let report = validate_density(&rho);
    (rho, report)
}

/// `s_i = tr(ρ σ_i)`
pub fn bloch_from_density(rho: &ComplexMatrix) -> Vector3<f64> {
    let p = pauli();
    Vector3::from_fn(|i, _| real_trace(&(rho * &p[i])))
}

/// `s_A`, `s_B` and `T_ij = tr(ρ σ_i⊗σ_j)` of a 4×4 density matrix.
pub fn params_from_density(rho: &ComplexMatrix) -> TwoQubitParams {
    let p = pauli();
    let id = identity(2);
    TwoQubitParams {
        s_a: Vector3::from_fn(|i, _| real_trace(&(rho * p[i].kronecker(&id)))),
        s_b: Vector3::from_fn(|i, _| real_trace(&(rho * id.kronecker(&p[i])))),
        t: Matrix3::from_fn(|i, j| real_trace(&(rho * p[i].kronecker(&p[j])))),
    }
}

/// Hermiticity, trace and spectrum of a candidate density matrix.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DensityReport {
    pub hermiticity_residual: f64,
    pub trace_residual: f64,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
}

impl DensityReport {
    pub fn is_valid(&self) -> bool {
        self.hermiticity_residual <= FRAME_TOL
            && self.trace_residual <= FRAME_TOL
            && self.min_eigenvalue >= -EIGEN_TOL
    }
}

pub fn validate_density(rho: &ComplexMatrix) -> DensityReport {
    let hermiticity_residual = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tr = rho.trace();
    let trace_residual = (tr - c(1.0, 0.0)).norm();
    let eigenvalues = hermitian_eigenvalues(rho);
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(f64::NAN);
    DensityReport {
        hermiticity_residual,
        trace_residual,
        eigenvalues,
        min_eigenvalue,
    }
}

fn require_valid(rho: &ComplexMatrix, dim: usize) -> Result<()> {
    if rho.shape() != (dim, dim) {
        return Err(Error::InvalidDensity(format!("expected {dim}x{dim}, found {:?}", rho.shape())));
    }
    let report = validate_density(rho);
    if !report.is_valid() {
        return Err(Error::InvalidDensity(format!(
            "hermiticity {:e}, trace {:e}, min eigenvalue {:e}",
            report.hermiticity_residual, report.trace_residual, report.min_eigenvalue
        )));
    }
    Ok(())
}

/// `½(I + b â·σ)` for `b = ±1`.
pub fn eta_projector(axis: &MeasurementAxis, b: f64) -> ComplexMatrix {
    (identity(2) + pauli_dot(axis.vector()) * c(b, 0.0)) * c(0.5, 0.0)
}

/// `p(b) = tr(ρ ½(I + b â·σ))`, ordered `b = +1, −1`.
pub fn born_eta(rho: &ComplexMatrix, axis: &MeasurementAxis) -> Result<[f64; 2]> {
    require_valid(rho, 2)?;
    Ok([1.0, -1.0].map(|b| real_trace(&(rho * eta_projector(axis, b)))))
}

/// SIC effects `E_{aa'} = ¼(I + n̂_{aa'}·σ)`, in outcome order.
pub fn sic_effects() -> [ComplexMatrix; 4] {
    tetra_vectors().map(|n| (identity(2) + pauli_dot(&n)) * c(0.25, 0.0))
}

pub fn born_sic(rho: &ComplexMatrix) -> Result<[f64; 4]> {
    require_valid(rho, 2)?;
    let effects = sic_effects();
    Ok(std::array::from_fn(|k| real_trace(&(rho * &effects[k]))))
}

/// SU(2) lift of an orthogonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum Lift {
    /// `U` with `U (s·σ) U† = (O s)·σ`, defined up to sign.
    Unitary(ComplexMatrix),
    /// `det O = −1`: no unitary implements the map.
    Antiunitary,
}

/// `U = cos(θ/2) I − i sin(θ/2) û·σ` for a proper rotation by `θ` about `û`.
pub fn unitary_from_rotation(o: &Orthogonal3) -> Lift {
    if !o.is_proper() {
        return Lift::Antiunitary;
    }
    let q = o.quaternion();
    let (w, v) = (q.w, q.imag());
    let u = identity(2) * c(w, 0.0) - pauli_dot(&v) * c(0.0, 1.0);
    Lift::Unitary(u)
}

/// `U ρ U†`
pub fn conjugate(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    u * rho * u.adjoint()
}

/// `G G† / tr(G G†)` for a seeded complex Gaussian `G`.
pub fn random_density(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Frame state of a one-qubit density matrix, through its Bloch vector.
pub fn frame_state_of(rho: &ComplexMatrix) -> Result<QubitFrameState> {
    require_valid(rho, 2)?;
    let s = bloch_from_density(rho);
    // Rounding can push |s| of a pure state a hair past 1.
    let s = if s.norm() > 1.0 { s / s.norm() } else { s };
    QubitFrameState::from_bloch(&s)
}

/// Frame state of a two-qubit density matrix, through `(s_A, s_B, T)`.
pub fn two_qubit_frame_state_of(rho: &ComplexMatrix) -> Result<TwoQubitFrameState> {
    require_valid(rho, 4)?;
    let p = params_from_density(rho);
    let clamp = |s: Vector3<f64>| if s.norm() > 1.0 { s / s.norm() } else { s };
    let t = CorrelationMatrix::new(p.t.map(|x| x.clamp(-1.0, 1.0)))?;
    TwoQubitFrameState::from_params(&clamp(p.s_a), &clamp(p.s_b), &t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= eps)
    }

    fn real(rows: usize, vals: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_row_slice(rows, rows, &vals.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn density_from_bloch_examples() {
        assert!(close(&density_from_bloch(&Vector3::z()).unwrap(), &real(2, &[1.0, 0.0, 0.0, 0.0]), 1e-15));
        assert!(close(&density_from_bloch(&Vector3::zeros()).unwrap(), &(identity(2) * c(0.5, 0.0)), 1e-15));
        assert!(close(&density_from_bloch(&Vector3::x()).unwrap(), &real(2, &[0.5, 0.5, 0.5, 0.5]), 1e-15));
        assert_eq!(density_from_bloch(&(Vector3::x() * 2.0)).unwrap_err().name(), "BlochOutOfBall");
    }

    #[test]
    fn density_from_params_examples() {
        let (singlet, report) = density_from_params(&Vector3::zeros(), &Vector3::zeros(), &-Matrix3::identity());
        assert!(report.is_valid());
        let expected = [0.0, 0.0, 0.0, 1.0];
        for (x, y) in report.eigenvalues.iter().zip(expected) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-10);
        }
        // |ψ⁻⟩ = (|01⟩ − |10⟩)/√2
        assert_abs_diff_eq!(singlet[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(singlet[(1, 2)].re, -0.5, epsilon = 1e-15);

        let (mixed, report) = density_from_params(&Vector3::zeros(), &Vector3::zeros(), &Matrix3::zeros());
        assert!(close(&mixed, &(identity(4) * c(0.25, 0.0)), 1e-15));
        assert_abs_diff_eq!(report.min_eigenvalue, 0.25, epsilon = 1e-12);

        let (zero_zero, _) = density_from_params(&Vector3::z(), &Vector3::z(), &Matrix3::from_diagonal(&Vector3::z()));
        let mut expected = vec![0.0; 16];
        expected[0] = 1.0;
        assert!(close(&zero_zero, &real(4, &expected), 1e-15));

        let (_, report) = density_from_params(&Vector3::zeros(), &Vector3::zeros(), &Matrix3::identity());
        assert!(!report.is_valid());
        assert_abs_diff_eq!(report.min_eigenvalue, -0.5, epsilon = 1e-10);
    }

    #[test]
    fn born_eta_examples() {
        let up = density_from_bloch(&Vector3::z()).unwrap();
        assert_abs_diff_eq!(born_eta(&up, &MeasurementAxis::z()).unwrap()[..], [1.0, 0.0][..], epsilon = 1e-15);
        let mixed = identity(2) * c(0.5, 0.0);
        let axis = MeasurementAxis::normalized(Vector3::new(0.3, -1.0, 2.0)).unwrap();
        assert_abs_diff_eq!(born_eta(&mixed, &axis).unwrap()[..], [0.5, 0.5][..], epsilon = 1e-15);
        let plus = density_from_bloch(&Vector3::x()).unwrap();
        assert_abs_diff_eq!(born_eta(&plus, &MeasurementAxis::z()).unwrap()[..], [0.5, 0.5][..], epsilon = 1e-15);
        assert_eq!(born_eta(&real(2, &[1.0, 0.0, 0.0, 1.0]), &MeasurementAxis::z()).unwrap_err().name(), "InvalidDensity");
    }

    #[test]
    fn born_sic_examples() {
        let mixed = identity(2) * c(0.5, 0.0);
        assert_abs_diff_eq!(born_sic(&mixed).unwrap()[..], [0.25; 4][..], epsilon = 1e-15);
        let up = density_from_bloch(&Vector3::z()).unwrap();
        let frame = QubitFrameState::from_bloch(&Vector3::z()).unwrap();
        assert_abs_diff_eq!(born_sic(&up).unwrap()[..], frame.probs()[..], epsilon = 1e-12);

        let sum = sic_effects().iter().fold(ComplexMatrix::zeros(2, 2), |acc, e| acc + e);
        assert!(close(&sum, &identity(2), 1e-15));
        for e in sic_effects() {
            assert!(hermitian_eigenvalues(&e)[0] >= -1e-15);
        }
    }

    #[test]
    fn unitary_lift_examples() {
        let Lift::Unitary(u) = unitary_from_rotation(&Orthogonal3::identity()) else { panic!() };
        assert!(close(&u, &identity(2), 1e-15));

        let Lift::Unitary(u) = unitary_from_rotation(&Orthogonal3::about_z(PI)) else { panic!() };
        let minus_i_sz = pauli()[2].clone() * c(0.0, -1.0);
        assert!(close(&u, &minus_i_sz, 1e-12) || close(&u, &(-minus_i_sz), 1e-12));
        let rho = density_from_bloch(&Vector3::x()).unwrap();
        assert_abs_diff_eq!(bloch_from_density(&conjugate(&u, &rho)), -Vector3::x(), epsilon = 1e-12);

        let improper = Orthogonal3::new(-Matrix3::identity()).unwrap();
        assert_eq!(unitary_from_rotation(&improper), Lift::Antiunitary);
    }

    #[test]
    fn random_density_is_valid_and_reproducible() {
        for seed in 0..20 {
            for dim in [2, 4] {
                let rho = random_density(dim, seed);
                assert!(validate_density(&rho).is_valid());
                assert_eq!(rho, random_density(dim, seed));
            }
        }
    }

    #[test]
    fn params_roundtrip_through_density() {
        let rho = random_density(4, 9);
        let p = params_from_density(&rho);
        let (back, _) = density_from_params(&p.s_a, &p.s_b, &p.t);
        assert!(close(&rho, &back, 1e-12));
    }
}
