use nalgebra::Vector3;

use super::{rotated_states, ChshSettings};
use crate::error::{Error, Result};
use crate::frame::tetra_vectors;

const DENOMINATOR_FLOOR: f64 = 1e-15;

/// A joint distribution `p(a₁a₁', a₂a₂'; b₁b₁', b₂b₂')` over 256 outcomes.
///
/// Flattened as `((a₁·4 + a₂)·4 + b₁)·4 + b₂`, each index in single-qubit
/// outcome order.
#[derive(Clone, Debug, PartialEq)]
pub struct FineJoint {
    joint: Vec<f64>,
}

/// Invariant diagnostics of a [`FineJoint`] against the rotated singlets.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FineReport {
    pub min_entry: f64,
    pub total: f64,
    pub max_marginal_residual: f64,
}

impl FineReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_entry >= -tol && (self.total - 1.0).abs() <= tol && self.max_marginal_residual <= tol
    }
}

fn flat(a1: usize, a2: usize, b1: usize, b2: usize) -> usize {
    ((a1 * 4 + a2) * 4 + b1) * 4 + b2
}

impl FineJoint {
    pub fn entries(&self) -> &[f64] {
        &self.joint
    }

    pub fn entry(&self, a1: usize, a2: usize, b1: usize, b2: usize) -> f64 {
        self.joint[flat(a1, a2, b1, b2)]
    }

    pub fn min_entry(&self) -> f64 {
        self.joint.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn total(&self) -> f64 {
        self.joint.iter().sum()
    }

    /// Marginal on `(a_i a_i', b_j b_j')`, zero-based `i, j`, Alice-major.
    pub fn pair_marginal(&self, i: usize, j: usize) -> [f64; 16] {
        let mut out = [0.0; 16];
        for a1 in 0..4 {
            for a2 in 0..4 {
                for b1 in 0..4 {
                    for b2 in 0..4 {
                        let a = [a1, a2][i];
                        let b = [b1, b2][j];
                        out[4 * a + b] += self.entry(a1, a2, b1, b2);
                    }
                }
            }
        }
        out
    }

    pub fn report(&self, settings: &ChshSettings) -> FineReport {
        let states = rotated_states(settings);
        let mut residual = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let m = self.pair_marginal(i, j);
                for (x, y) in m.iter().zip(states[i][j].probs()) {
                    residual = residual.max((x - y).abs());
                }
            }
        }
        FineReport {
            min_entry: self.min_entry(),
            total: self.total(),
            max_marginal_residual: residual,
        }
    }
}

/// Joint distribution of all readout outcomes for the four rotated singlets.
///
/// With rotated frame vectors `x = O_Aᵢ n̂`, `u = O_B₁ n̂_{b₁}`, `v = O_B₂ n̂_{b₂}`:
///
/// ```text
/// p(aᵢ; b₁, b₂) = (1/64)(1 − x·u)(1 − x·v)
/// p(b₁, b₂)     = Σ_{aᵢ} p(aᵢ; b₁, b₂)          [= (1/16)(1 + ⅓ u·v)]
/// p(a₁, a₂; b₁, b₂) = p(a₁; b₁, b₂) p(a₂; b₁, b₂) / p(b₁, b₂)
/// ```
///
/// The denominator is obtained by summing Alice's first factor, not from the
/// closed form, and must be the same for either Alice setting.
pub fn fine_joint_readout(settings: &ChshSettings) -> Result<FineJoint> {
    let n = tetra_vectors();
    let rot = |o: &crate::process::Orthogonal3| -> [Vector3<f64>; 4] { n.map(|v| o.apply(&v)) };
    let alice = [rot(&settings.alice[0]), rot(&settings.alice[1])];
    let (u, v) = (rot(&settings.bob[0]), rot(&settings.bob[1]));

    // factor[i][a][b1][b2] = p(aᵢ; b₁, b₂)
    let mut factor = [[[[0.0; 4]; 4]; 4]; 2];
    for (i, x) in alice.iter().enumerate() {
        for a in 0..4 {
            for b1 in 0..4 {
                for b2 in 0..4 {
                    factor[i][a][b1][b2] = (1.0 - x[a].dot(&u[b1])) * (1.0 - x[a].dot(&v[b2])) / 64.0;
                }
            }
        }
    }

    let mut joint = vec![0.0; 256];
    for b1 in 0..4 {
        for b2 in 0..4 {
            let denom: f64 = (0..4).map(|a| factor[0][a][b1][b2]).sum();
            if denom <= DENOMINATOR_FLOOR {
                return Err(Error::DegenerateDenominator { value: denom });
            }
            for a1 in 0..4 {
                for a2 in 0..4 {
                    joint[flat(a1, a2, b1, b2)] = factor[0][a1][b1][b2] * factor[1][a2][b1][b2] / denom;
                }
            }
        }
    }
    Ok(FineJoint { joint })
}
