//! Two-qubit frame states over four bits `(aa', bb')`.
//!
//! The 16 outcomes are flattened Alice-major: `index = 4·alice + bob`, with
//! each side in the single-qubit outcome order.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::frame::{tetra_vectors, BlochVector, OutcomeIndex, QubitFrameState, FRAME_TOL};
use crate::process::QuasiStochasticMatrix;

/// Correlation matrix `T` with entries in `[−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationMatrix(Matrix3<f64>);

impl CorrelationMatrix {
    pub fn new(t: Matrix3<f64>) -> Result<CorrelationMatrix> {
        let max = t.amax();
        if max > 1.0 + FRAME_TOL {
            return Err(Error::InvalidState(format!("correlation entry {max} exceeds 1")));
        }
        Ok(CorrelationMatrix(t))
    }

    pub fn zero() -> CorrelationMatrix {
        CorrelationMatrix(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }
}

/// The parameter triple `(s_A, s_B, T)` of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitParams {
    pub s_a: BlochVector,
    pub s_b: BlochVector,
    pub t: Matrix3<f64>,
}

/// A positive distribution over the 16 outcomes `(aa', bb')`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitFrameState {
    probs: [f64; 16],
}

pub fn flat_index(alice: OutcomeIndex, bob: OutcomeIndex) -> usize {
    4 * alice.index() + bob.index()
}

fn params_of(probs: &[f64; 16]) -> TwoQubitParams {
    let n = tetra_vectors();
    let mut s_a = Vector3::zeros();
    let mut s_b = Vector3::zeros();
    let mut t = Matrix3::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let p = probs[4 * a + b];
            s_a += n[a] * p;
            s_b += n[b] * p;
            t += n[a] * n[b].transpose() * p;
        }
    }
    TwoQubitParams {
        s_a: s_a * 3.0,
        s_b: s_b * 3.0,
        t: t * 9.0,
    }
}

fn probs_of(s_a: &Vector3<f64>, s_b: &Vector3<f64>, t: &Matrix3<f64>) -> [f64; 16] {
    let n = tetra_vectors();
    std::array::from_fn(|k| {
        let (a, b) = (&n[k / 4], &n[k % 4]);
        (1.0 + s_a.dot(a) + s_b.dot(b) + a.dot(&(t * b))) / 16.0
    })
}

fn min_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

impl TwoQubitFrameState {
    /// `p(aa',bb') = 1/16 (1 + s_A·n̂_{aa'} + s_B·n̂_{bb'} + n̂_{aa'}·T n̂_{bb'})`.
    ///
    /// Fails with `NotPositive` when the parameters give a negative entry.
    pub fn from_params(
        s_a: &BlochVector,
        s_b: &BlochVector,
        t: &CorrelationMatrix,
    ) -> Result<TwoQubitFrameState> {
        for s in [s_a, s_b] {
            if s.norm() > 1.0 + FRAME_TOL {
                return Err(Error::BlochOutOfBall { norm: s.norm() });
            }
        }
        let probs = probs_of(s_a, s_b, t.matrix());
        let min_entry = min_of(&probs);
        if min_entry < -FRAME_TOL {
            return Err(Error::NotPositive { min_entry });
        }
        Ok(TwoQubitFrameState { probs })
    }

    /// Validates normalization, positivity, both marginals and the recovered
    /// correlation matrix.
    pub fn from_probs(probs: [f64; 16]) -> Result<TwoQubitFrameState> {
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > FRAME_TOL {
            return Err(Error::InvalidState(format!("entries sum to {sum}")));
        }
        let min_entry = min_of(&probs);
        if min_entry < -FRAME_TOL {
            return Err(Error::InvalidState(format!("negative entry {min_entry:e}")));
        }
        let state = TwoQubitFrameState { probs };
        QubitFrameState::from_probs(state.marginal_a_raw())?;
        QubitFrameState::from_probs(state.marginal_b_raw())?;
        CorrelationMatrix::new(state.params().t)?;
        Ok(state)
    }

    pub fn from_slice(probs: &[f64]) -> Result<TwoQubitFrameState> {
        let probs: [f64; 16] = probs.try_into().map_err(|_| Error::DimensionMismatch {
            expected: 16,
            found: probs.len(),
        })?;
        TwoQubitFrameState::from_probs(probs)
    }

    /// Builds without validation; for analytically constructed states only.
    pub(crate) fn from_probs_unchecked(probs: [f64; 16]) -> TwoQubitFrameState {
        TwoQubitFrameState { probs }
    }

    pub fn probs(&self) -> &[f64; 16] {
        &self.probs
    }

    pub fn prob(&self, alice: OutcomeIndex, bob: OutcomeIndex) -> f64 {
        self.probs[flat_index(alice, bob)]
    }

    /// `s_A = 3 Σ p n̂_a`, `s_B = 3 Σ p n̂_b`, `T = 9 Σ p n̂_a n̂_bᵀ`.
    pub fn params(&self) -> TwoQubitParams {
        params_of(&self.probs)
    }

    fn marginal_a_raw(&self) -> [f64; 4] {
        std::array::from_fn(|a| self.probs[4 * a..4 * a + 4].iter().sum())
    }

    fn marginal_b_raw(&self) -> [f64; 4] {
        std::array::from_fn(|b| (0..4).map(|a| self.probs[4 * a + b]).sum())
    }

    pub fn marginal_a(&self) -> Result<QubitFrameState> {
        QubitFrameState::from_probs(self.marginal_a_raw())
    }

    pub fn marginal_b(&self) -> Result<QubitFrameState> {
        QubitFrameState::from_probs(self.marginal_b_raw())
    }

    pub fn max_abs_diff(&self, other: &TwoQubitFrameState) -> f64 {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

pub fn state_from_params(
    s_a: &BlochVector,
    s_b: &BlochVector,
    t: &CorrelationMatrix,
) -> Result<TwoQubitFrameState> {
    TwoQubitFrameState::from_params(s_a, s_b, t)
}

pub fn params_from_state(p: &TwoQubitFrameState) -> TwoQubitParams {
    p.params()
}

/// The singlet `p₀(aa',bb') = 1/16 (1 − n̂_{aa'}·n̂_{bb'})`.
///
/// Matching pairs have probability 0; every other pair has 1/12.
pub fn singlet() -> TwoQubitFrameState {
    let n = tetra_vectors();
    TwoQubitFrameState {
        probs: std::array::from_fn(|k| (1.0 - n[k / 4].dot(&n[k % 4])) / 16.0),
    }
}

pub fn marginal_a(p: &TwoQubitFrameState) -> Result<QubitFrameState> {
    p.marginal_a()
}

pub fn marginal_b(p: &TwoQubitFrameState) -> Result<QubitFrameState> {
    p.marginal_b()
}

/// Output of two local processes: a table with `n_alice × n_bob` cells,
/// flattened Alice-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    pub n_alice: usize,
    pub n_bob: usize,
    pub probs: Vec<f64>,
}

impl JointDistribution {
    pub fn get(&self, alice: usize, bob: usize) -> f64 {
        self.probs[alice * self.n_bob + bob]
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn marginal_alice(&self) -> Vec<f64> {
        (0..self.n_alice)
            .map(|a| (0..self.n_bob).map(|b| self.get(a, b)).sum())
            .collect()
    }

    pub fn marginal_bob(&self) -> Vec<f64> {
        (0..self.n_bob)
            .map(|b| (0..self.n_alice).map(|a| self.get(a, b)).sum())
            .collect()
    }

    /// Reinterprets a 4×4 table as a two-qubit frame state, with validation.
    pub fn into_state(self) -> Result<TwoQubitFrameState> {
        if (self.n_alice, self.n_bob) != (4, 4) {
            return Err(Error::DimensionMismatch {
                expected: 16,
                found: self.n_alice * self.n_bob,
            });
        }
        TwoQubitFrameState::from_slice(&self.probs)
    }
}

/// `Σ S_A(x|α) S_B(y|β) p(α, β)`. The output is not validated.
pub fn apply_local(
    s_a: &QuasiStochasticMatrix,
    s_b: &QuasiStochasticMatrix,
    p: &TwoQubitFrameState,
) -> Result<JointDistribution> {
    for s in [s_a, s_b] {
        if s.n_inputs() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: s.n_inputs(),
            });
        }
    }
    let (n_alice, n_bob) = (s_a.n_outputs(), s_b.n_outputs());
    let p = nalgebra::Matrix4::from_row_slice(&p.probs);
    // out = S_A · P · S_Bᵀ with P[α][β] = p(α, β)
    let out = s_a.entries() * p * s_b.entries().transpose();
    let probs = (0..n_alice)
        .flat_map(|x| (0..n_bob).map(move |y| (x, y)))
        .map(|(x, y)| out[(x, y)])
        .collect();
    Ok(JointDistribution {
        n_alice,
        n_bob,
        probs,
    })
}
