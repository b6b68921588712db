//! Quasi-stochastic processes acting on single-qubit frame states.
//!
//! Matrices are column-stochastic: rows are output outcomes, columns are input
//! outcomes, and every column sums to one. Entries may be negative.

use nalgebra::{DMatrix, DVector, Matrix3, Rotation3, UnitQuaternion, Vector3};

use crate::error::{Error, Result};
use crate::frame::{tetra_vectors, OutcomeIndex, QubitFrameState, FRAME_TOL};

/// Tolerance used when reconstructing a rotation from its process matrix.
pub const ROTATION_MATCH_TOL: f64 = 1e-9;

/// Tolerance for ball preservation of affine channels on the direction sample.
pub const BALL_TOL: f64 = 1e-9;

/// Number of sphere directions probed when checking an affine channel.
pub const BALL_SAMPLE_DIRECTIONS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiStochasticMatrix {
    entries: DMatrix<f64>,
}

impl QuasiStochasticMatrix {
    /// Wraps `entries` after checking that every column sums to one.
    pub fn new(entries: DMatrix<f64>) -> Result<QuasiStochasticMatrix> {
        for (column, col) in entries.column_iter().enumerate() {
            let sum = col.sum();
            if (sum - 1.0).abs() > FRAME_TOL {
                return Err(Error::NotQuasiStochastic { column, sum });
            }
        }
        Ok(QuasiStochasticMatrix { entries })
    }

    /// Builds from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<QuasiStochasticMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: bad.len(),
            });
        }
        QuasiStochasticMatrix::new(DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]))
    }

    pub fn identity(n: usize) -> QuasiStochasticMatrix {
        QuasiStochasticMatrix {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, output: usize, input: usize) -> f64 {
        self.entries[(output, input)]
    }

    pub fn n_outputs(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_inputs(&self) -> usize {
        self.entries.ncols()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.row_iter().map(|r| r.sum()).collect()
    }

    /// Quasi-bistochastic: square, and rows also sum to one.
    pub fn is_quasi_bistochastic(&self, tol: f64) -> bool {
        self.entries.is_square() && self.row_sums().iter().all(|s| (s - 1.0).abs() <= tol)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.min()
    }

    /// `S·p` for an arbitrary input vector of matching length.
    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.n_inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs(),
                found: p.len(),
            });
        }
        let out = &self.entries * DVector::from_column_slice(p);
        Ok(out.iter().copied().collect())
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn after(&self, other: &QuasiStochasticMatrix) -> Result<QuasiStochasticMatrix> {
        compose(self, other)
    }

    pub fn max_abs_diff(&self, other: &QuasiStochasticMatrix) -> f64 {
        if self.entries.shape() != other.entries.shape() {
            return f64::INFINITY;
        }
        (&self.entries - &other.entries).amax()
    }

    pub fn negativity(&self) -> NegativityReport {
        negativity(self)
    }
}

/// A real 3×3 orthogonal matrix, proper or improper.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orthogonal3(Matrix3<f64>);

impl Orthogonal3 {
    pub fn new(m: Matrix3<f64>) -> Result<Orthogonal3> {
        let residual = orthogonality_residual(&m);
        if residual > FRAME_TOL {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Orthogonal3(m))
    }

    pub fn from_rows(rows: &[[f64; 3]; 3]) -> Result<Orthogonal3> {
        Orthogonal3::new(Matrix3::from_fn(|r, c| rows[r][c]))
    }

    pub fn identity() -> Orthogonal3 {
        Orthogonal3(Matrix3::identity())
    }

    /// Right-handed rotation by `angle` about `axis` (normalized internally).
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Result<Orthogonal3> {
        let norm = axis.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidInput("rotation axis must be non-zero".into()));
        }
        Ok(Orthogonal3::from_scaled_axis(&(axis / norm * angle)))
    }

    /// Rotation by `|v|` about `v/|v|`; the zero vector gives the identity.
    pub fn from_scaled_axis(v: &Vector3<f64>) -> Orthogonal3 {
        Orthogonal3(*UnitQuaternion::from_scaled_axis(*v).to_rotation_matrix().matrix())
    }

    pub fn about_x(angle: f64) -> Orthogonal3 {
        Orthogonal3::from_scaled_axis(&(Vector3::x() * angle))
    }

    pub fn about_y(angle: f64) -> Orthogonal3 {
        Orthogonal3::from_scaled_axis(&(Vector3::y() * angle))
    }

    pub fn about_z(angle: f64) -> Orthogonal3 {
        Orthogonal3::from_scaled_axis(&(Vector3::z() * angle))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Orthogonal3 {
        Orthogonal3(self.0.transpose())
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn is_proper(&self) -> bool {
        self.determinant() > 0.0
    }

    pub fn then(&self, next: &Orthogonal3) -> Orthogonal3 {
        Orthogonal3(next.0 * self.0)
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    /// Negated by −I when improper, so the result is always a proper rotation.
    pub fn proper_part(&self) -> Orthogonal3 {
        if self.is_proper() {
            *self
        } else {
            Orthogonal3(-self.0)
        }
    }

    /// Unit quaternion of the proper part.
    pub fn quaternion(&self) -> UnitQuaternion<f64> {
        UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(*self.proper_part().matrix()))
    }

    /// Rotation vector (axis times angle) of the proper part.
    pub fn scaled_axis(&self) -> Vector3<f64> {
        self.quaternion().scaled_axis()
    }

    pub fn to_rows(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.0[(r, c)]))
    }
}

fn orthogonality_residual(m: &Matrix3<f64>) -> f64 {
    (m.transpose() * m - Matrix3::identity()).amax()
}

/// A unit measurement direction `â`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAxis(Vector3<f64>);

impl MeasurementAxis {
    pub fn new(v: Vector3<f64>) -> Result<MeasurementAxis> {
        let norm = v.norm();
        if (norm - 1.0).abs() > FRAME_TOL {
            return Err(Error::NotUnitAxis { norm });
        }
        Ok(MeasurementAxis(v))
    }

    /// Normalizes any non-zero vector.
    pub fn normalized(v: Vector3<f64>) -> Result<MeasurementAxis> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitAxis { norm });
        }
        Ok(MeasurementAxis(v / norm))
    }

    pub fn z() -> MeasurementAxis {
        MeasurementAxis(Vector3::z())
    }

    pub fn x() -> MeasurementAxis {
        MeasurementAxis(Vector3::x())
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }
}

/// The affine Bloch-vector map `s ↦ Λs + s₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineChannel {
    lambda: Matrix3<f64>,
    offset: Vector3<f64>,
}

impl AffineChannel {
    /// Accepts the map if it sends every sampled unit direction into the closed
    /// unit ball. Complete positivity is not checked.
    pub fn new(lambda: Matrix3<f64>, offset: Vector3<f64>) -> Result<AffineChannel> {
        let worst = sphere_directions(BALL_SAMPLE_DIRECTIONS)
            .iter()
            .map(|u| (lambda * u + offset).norm())
            .fold(offset.norm(), f64::max);
        if worst > 1.0 + BALL_TOL {
            return Err(Error::BallNotPreserved { norm: worst });
        }
        Ok(AffineChannel { lambda, offset })
    }

    pub fn depolarizing(shrink: f64) -> Result<AffineChannel> {
        AffineChannel::new(Matrix3::identity() * shrink, Vector3::zeros())
    }

    pub fn lambda(&self) -> &Matrix3<f64> {
        &self.lambda
    }

    pub fn offset(&self) -> &Vector3<f64> {
        &self.offset
    }

    pub fn map(&self, s: &Vector3<f64>) -> Vector3<f64> {
        self.lambda * s + self.offset
    }
}

/// Fibonacci-lattice directions on the unit sphere.
pub fn sphere_directions(count: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// The measurement `M(b₁…b_N|aa') = 2^−N (1 + m⃗_{b₁…b_N}·w⃗_{aa'})`.
///
/// Output strings are indexed with `b₁` as the most significant bit and `+1`
/// before `−1`, the same convention as [`OutcomeIndex`].
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralMeasurement {
    n_bits: usize,
    m_vectors: Vec<Vector3<f64>>,
    w_vectors: [Vector3<f64>; 4],
}

impl GeneralMeasurement {
    pub fn new(
        n_bits: usize,
        m_vectors: Vec<Vector3<f64>>,
        w_vectors: [Vector3<f64>; 4],
    ) -> Result<GeneralMeasurement> {
        let expected = 1usize
            .checked_shl(n_bits as u32)
            .filter(|_| n_bits > 0 && n_bits < 32)
            .ok_or_else(|| Error::InvalidInput(format!("unsupported bit-string length {n_bits}")))?;
        if m_vectors.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: m_vectors.len(),
            });
        }
        let residual = m_vectors.iter().fold(Vector3::zeros(), |acc, m| acc + m).amax();
        if residual > FRAME_TOL {
            return Err(Error::NormalizationViolated { residual });
        }
        Ok(GeneralMeasurement {
            n_bits,
            m_vectors,
            w_vectors,
        })
    }

    /// `m⃗_+ = 3â`, `m⃗_− = −3â`, `w⃗_{aa'} = n̂_{aa'}`: the η measurement.
    pub fn eta(axis: &MeasurementAxis) -> GeneralMeasurement {
        let a = axis.vector() * 3.0;
        GeneralMeasurement {
            n_bits: 1,
            m_vectors: vec![a, -a],
            w_vectors: tetra_vectors(),
        }
    }

    /// `m⃗_{bb'} = 3n̂_{bb'}`, `w⃗_{aa'} = n̂_{aa'}`: the direct readout.
    pub fn readout() -> GeneralMeasurement {
        GeneralMeasurement {
            n_bits: 2,
            m_vectors: tetra_vectors().iter().map(|n| n * 3.0).collect(),
            w_vectors: tetra_vectors(),
        }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn n_outcomes(&self) -> usize {
        self.m_vectors.len()
    }

    pub fn m_vectors(&self) -> &[Vector3<f64>] {
        &self.m_vectors
    }

    pub fn w_vectors(&self) -> &[Vector3<f64>; 4] {
        &self.w_vectors
    }

    /// `w̄ = Σ w⃗_{aa'}`.
    pub fn w_bar(&self) -> Vector3<f64> {
        self.w_vectors.iter().fold(Vector3::zeros(), |acc, w| acc + w)
    }

    /// `M = Σ w⃗_{aa'} n̂_{aa'}ᵀ`.
    pub fn dyadic(&self) -> Matrix3<f64> {
        self.w_vectors
            .iter()
            .zip(tetra_vectors().iter())
            .fold(Matrix3::zeros(), |acc, (w, n)| acc + w * n.transpose())
    }

    /// Output law on a state with Bloch vector `s`:
    /// `2^−N (1 + ¼ w̄·m⃗ + ¼ m⃗·(M s))`.
    pub fn outcome_law(&self, s: &Vector3<f64>) -> Vec<f64> {
        let w_bar = self.w_bar();
        let ms = self.dyadic() * s;
        let scale = 1.0 / self.n_outcomes() as f64;
        self.m_vectors
            .iter()
            .map(|m| scale * (1.0 + 0.25 * w_bar.dot(m) + 0.25 * m.dot(&ms)))
            .collect()
    }
}

/// `S(bb'|aa') = ¼(1 + 3 n̂_{bb'}·O n̂_{aa'})`; maps the state of `s` to that of `O s`.
pub fn rotation_process(o: &Orthogonal3) -> QuasiStochasticMatrix {
    let n = tetra_vectors();
    let entries = DMatrix::from_fn(4, 4, |b, a| 0.25 * (1.0 + 3.0 * n[b].dot(&o.apply(&n[a]))));
    QuasiStochasticMatrix { entries }
}

/// `S(b|a) = ¼(1 + 3 n̂_b·Λ n̂_a + n̂_b·s₀)`; maps the state of `s` to that of `Λs + s₀`.
pub fn affine_channel_process(ch: &AffineChannel) -> QuasiStochasticMatrix {
    let n = tetra_vectors();
    let entries = DMatrix::from_fn(4, 4, |b, a| {
        0.25 * (1.0 + 3.0 * n[b].dot(&(ch.lambda * n[a])) + n[b].dot(&ch.offset))
    });
    QuasiStochasticMatrix { entries }
}

/// `η(b|aa') = ½(1 + 3b â·n̂_{aa'})`, rows ordered `b = +1, −1`.
pub fn eta_measurement(axis: &MeasurementAxis) -> QuasiStochasticMatrix {
    let n = tetra_vectors();
    let a = axis.vector();
    let entries = DMatrix::from_fn(2, 4, |row, col| {
        let b = if row == 0 { 1.0 } else { -1.0 };
        0.5 * (1.0 + 3.0 * b * a.dot(&n[col]))
    });
    QuasiStochasticMatrix { entries }
}

/// The direct readout `R(bb'|aa') = δ_{ab} δ_{a'b'}`.
pub fn direct_readout() -> QuasiStochasticMatrix {
    QuasiStochasticMatrix::identity(4)
}

pub fn general_measurement_process(gm: &GeneralMeasurement) -> QuasiStochasticMatrix {
    let scale = 1.0 / gm.n_outcomes() as f64;
    let entries = DMatrix::from_fn(gm.n_outcomes(), 4, |b, a| {
        scale * (1.0 + gm.m_vectors[b].dot(&gm.w_vectors[a]))
    });
    QuasiStochasticMatrix { entries }
}

/// Applies a process to a frame state. The output is a (quasi-)distribution;
/// whether it must be positive is up to the caller.
pub fn apply_process(s: &QuasiStochasticMatrix, p: &QubitFrameState) -> Result<Vec<f64>> {
    s.apply(p.probs())
}

/// `S2 · S1`: apply `s1` first, then `s2`.
pub fn compose(s2: &QuasiStochasticMatrix, s1: &QuasiStochasticMatrix) -> Result<QuasiStochasticMatrix> {
    if s2.n_inputs() != s1.n_outputs() {
        return Err(Error::DimensionMismatch {
            expected: s2.n_inputs(),
            found: s1.n_outputs(),
        });
    }
    Ok(QuasiStochasticMatrix {
        entries: &s2.entries * &s1.entries,
    })
}

/// Recovers `O` from a rotation process.
///
/// From `Σ n̂n̂ᵀ = (4/3)I` and `Σ n̂ = 0`, `Σ_{b,a} S(b|a) n̂_b n̂_aᵀ = (4/3) O`.
pub fn rotation_from_process(s: &QuasiStochasticMatrix) -> Result<Orthogonal3> {
    if s.entries.shape() != (4, 4) {
        return Err(Error::NotARotation(format!(
            "expected a 4x4 matrix, found {}x{}",
            s.n_outputs(),
            s.n_inputs()
        )));
    }
    let n = tetra_vectors();
    let mut o = Matrix3::zeros();
    for b in OutcomeIndex::ALL {
        for a in OutcomeIndex::ALL {
            o += n[b.index()] * n[a.index()].transpose() * s.get(b.index(), a.index());
        }
    }
    o *= 0.75;
    let residual = orthogonality_residual(&o);
    if residual > ROTATION_MATCH_TOL {
        return Err(Error::NotARotation(format!(
            "reconstructed matrix is not orthogonal (residual {residual:e})"
        )));
    }
    let o = Orthogonal3(o);
    let mismatch = rotation_process(&o).max_abs_diff(s);
    if mismatch > ROTATION_MATCH_TOL {
        return Err(Error::NotARotation(format!(
            "matrix deviates from rotation form by {mismatch:e}"
        )));
    }
    Ok(o)
}

/// Inverse of a rotation process: the rotation process of `Oᵀ`.
pub fn invert_rotation(s: &QuasiStochasticMatrix) -> Result<QuasiStochasticMatrix> {
    Ok(rotation_process(&rotation_from_process(s)?.transpose()))
}

/// Negative mass of a quasi-stochastic matrix.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct NegativityReport {
    pub total_negative_mass: f64,
    pub max_column_negative_mass: f64,
}

pub fn negativity(s: &QuasiStochasticMatrix) -> NegativityReport {
    let column_masses = s
        .entries
        .column_iter()
        .map(|c| c.iter().map(|x| (-x).max(0.0)).sum::<f64>());
    let (total, max_column) = column_masses.fold((0.0, 0.0_f64), |(t, m), c| (t + c, m.max(c)));
    NegativityReport {
        total_negative_mass: total,
        max_column_negative_mass: max_column,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::state_from_bloch;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_close(a: &[f64], b: &[f64], eps: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= eps, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn identity_rotation_is_identity_matrix() {
        let s = rotation_process(&Orthogonal3::identity());
        assert!(s.max_abs_diff(&QuasiStochasticMatrix::identity(4)) <= 1e-15);
        assert!(negativity(&s).total_negative_mass <= 1e-15);
    }

    #[test]
    fn half_turn_about_z_flips_x() {
        let s = rotation_process(&Orthogonal3::about_z(PI));
        // Permutation: every entry is 0 or 1.
        for x in s.entries().iter() {
            assert!(x.abs() < 1e-12 || (x - 1.0).abs() < 1e-12);
        }
        let out = apply_process(&s, &state_from_bloch(&Vector3::x()).unwrap()).unwrap();
        let expected = state_from_bloch(&-Vector3::x()).unwrap();
        assert_close(&out, expected.probs(), 1e-12);
    }

    #[test]
    fn quarter_turn_has_negative_entries() {
        let s = rotation_process(&Orthogonal3::about_z(FRAC_PI_2));
        assert!(s.min_entry() < 0.0);
        assert!(s.is_quasi_bistochastic(1e-12));
        let v = Vector3::new(0.3, -0.2, 0.5);
        let out = apply_process(&s, &state_from_bloch(&v).unwrap()).unwrap();
        let expected = state_from_bloch(&Vector3::new(0.2, 0.3, 0.5)).unwrap();
        assert_close(&out, expected.probs(), 1e-12);
    }

    #[test]
    fn rotation_rejects_non_orthogonal() {
        let err = Orthogonal3::new(Matrix3::identity() * 1.1).unwrap_err();
        assert_eq!(err.name(), "NotOrthogonal");
    }

    #[test]
    fn affine_examples() {
        let id = AffineChannel::new(Matrix3::identity(), Vector3::zeros()).unwrap();
        assert!(affine_channel_process(&id).max_abs_diff(&QuasiStochasticMatrix::identity(4)) <= 1e-15);

        let dep = affine_channel_process(&AffineChannel::depolarizing(0.5).unwrap());
        let out = apply_process(&dep, &state_from_bloch(&Vector3::z()).unwrap()).unwrap();
        assert_close(&out, state_from_bloch(&(Vector3::z() * 0.5)).unwrap().probs(), 1e-12);

        let constant = affine_channel_process(&AffineChannel::new(Matrix3::zeros(), Vector3::z()).unwrap());
        let target = state_from_bloch(&Vector3::z()).unwrap();
        for s in [Vector3::x(), Vector3::new(0.1, 0.2, -0.7), Vector3::zeros()] {
            let out = apply_process(&constant, &state_from_bloch(&s).unwrap()).unwrap();
            assert_close(&out, target.probs(), 1e-12);
        }

        let err = AffineChannel::new(Matrix3::identity(), Vector3::z() * 0.1).unwrap_err();
        assert_eq!(err.name(), "BallNotPreserved");
    }

    #[test]
    fn eta_along_z() {
        let eta = eta_measurement(&MeasurementAxis::z());
        assert_abs_diff_eq!(eta.get(0, 0), 1.366_025_403_784_438_6, epsilon = 1e-12);
        assert_abs_diff_eq!(eta.get(0, 1), -0.366_025_403_784_438_6, epsilon = 1e-12);

        let up = apply_process(&eta, &state_from_bloch(&Vector3::z()).unwrap()).unwrap();
        assert_close(&up, &[1.0, 0.0], 1e-12);
        let mixed = apply_process(&eta, &QubitFrameState::maximally_mixed()).unwrap();
        assert_close(&mixed, &[0.5, 0.5], 1e-15);

        let neg = negativity(&eta);
        assert_abs_diff_eq!(neg.total_negative_mass, 2.0 * (3f64.sqrt() - 1.0), epsilon = 1e-12);
        assert_abs_diff_eq!(neg.max_column_negative_mass, (3f64.sqrt() - 1.0) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn eta_rejects_non_unit_axis() {
        assert_eq!(MeasurementAxis::new(Vector3::new(0.0, 0.0, 2.0)).unwrap_err().name(), "NotUnitAxis");
    }

    #[test]
    fn readout_is_identity() {
        let r = direct_readout();
        let p = state_from_bloch(&Vector3::new(0.1, 0.4, -0.3)).unwrap();
        assert_close(&apply_process(&r, &p).unwrap(), p.probs(), 0.0);
        assert_close(&apply_process(&r, &QubitFrameState::maximally_mixed()).unwrap(), &[0.25; 4], 0.0);
        let neg = negativity(&r);
        assert_eq!((neg.total_negative_mass, neg.max_column_negative_mass), (0.0, 0.0));
    }

    #[test]
    fn general_measurement_reproduces_eta_and_readout() {
        for axis in [MeasurementAxis::z(), MeasurementAxis::normalized(Vector3::new(1.0, -2.0, 0.5)).unwrap()] {
            let m = general_measurement_process(&GeneralMeasurement::eta(&axis));
            assert!(m.max_abs_diff(&eta_measurement(&axis)) <= 1e-15);
        }
        let r = general_measurement_process(&GeneralMeasurement::readout());
        assert!(r.max_abs_diff(&direct_readout()) <= 1e-15);

        let zero = GeneralMeasurement::new(3, vec![Vector3::zeros(); 8], tetra_vectors()).unwrap();
        let out = apply_process(&general_measurement_process(&zero), &state_from_bloch(&Vector3::x()).unwrap()).unwrap();
        assert_close(&out, &[0.125; 8], 1e-15);
    }

    #[test]
    fn general_measurement_rejects_unbalanced_vectors() {
        let err = GeneralMeasurement::new(1, vec![Vector3::x(), Vector3::x()], tetra_vectors()).unwrap_err();
        assert_eq!(err.name(), "NormalizationViolated");
        let err = GeneralMeasurement::new(2, vec![Vector3::zeros(); 3], tetra_vectors()).unwrap_err();
        assert_eq!(err.name(), "DimensionMismatch");
    }

    #[test]
    fn apply_checks_dimension() {
        let err = direct_readout().apply(&[0.5, 0.5]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 2 });
    }

    #[test]
    fn half_turn_about_x_then_eta() {
        let flipped = compose(&eta_measurement(&MeasurementAxis::z()), &rotation_process(&Orthogonal3::about_x(PI))).unwrap();
        let out = apply_process(&flipped, &state_from_bloch(&Vector3::z()).unwrap()).unwrap();
        assert_close(&out, &[0.0, 1.0], 1e-12);
    }

    #[test]
    fn compose_checks_dimensions() {
        let eta = eta_measurement(&MeasurementAxis::z());
        assert_eq!(compose(&eta, &eta).unwrap_err().name(), "DimensionMismatch");
        let id = QuasiStochasticMatrix::identity(4);
        assert!(compose(&id, &eta.clone()).is_err());
        assert!(compose(&eta, &id).unwrap().max_abs_diff(&eta) == 0.0);
    }

    #[test]
    fn invert_rotation_examples() {
        let id = rotation_process(&Orthogonal3::identity());
        assert!(invert_rotation(&id).unwrap().max_abs_diff(&id) <= 1e-12);

        let theta = 0.7;
        let inv = invert_rotation(&rotation_process(&Orthogonal3::about_z(theta))).unwrap();
        assert!(inv.max_abs_diff(&rotation_process(&Orthogonal3::about_z(-theta))) <= 1e-12);

        // Positive, doubly stochastic, not a permutation.
        let mut m = DMatrix::from_element(4, 4, 0.1);
        for i in 0..4 {
            m[(i, i)] = 0.7;
        }
        let err = invert_rotation(&QuasiStochasticMatrix::new(m).unwrap()).unwrap_err();
        assert_eq!(err.name(), "NotARotation");
        assert_eq!(invert_rotation(&eta_measurement(&MeasurementAxis::z())).unwrap_err().name(), "NotARotation");
    }

    #[test]
    fn quasi_stochastic_rejects_bad_columns() {
        let err = QuasiStochasticMatrix::from_rows(&[vec![0.5, 0.5], vec![0.4, 0.5]]).unwrap_err();
        assert_eq!(err.name(), "NotQuasiStochastic");
        assert!(QuasiStochasticMatrix::from_rows(&[vec![1.5, 0.5], vec![-0.5, 0.5]]).is_ok());
    }

    #[test]
    fn sphere_directions_are_unit() {
        let dirs = sphere_directions(100);
        assert_eq!(dirs.len(), 100);
        assert!(dirs.iter().all(|d| (d.norm() - 1.0).abs() < 1e-12));
    }
}
