use super::{chsh_from_correlators, BehaviorTable, ChshVariant, CHSH_TOL};
use crate::error::{Error, Result};
use crate::lp::find_feasible_point;

/// Residual allowed when reproducing a behavior from a strategy mixture.
pub const MODEL_RESIDUAL_TOL: f64 = 1e-9;

/// A local deterministic strategy: fixed outcomes for each setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DeterministicStrategy {
    pub alice: [i8; 2],
    pub bob: [i8; 2],
}

impl DeterministicStrategy {
    /// The 16 strategies, bit `k` of the index giving `A₁, A₂, B₁, B₂` (0 ↦ +1).
    pub fn all() -> [DeterministicStrategy; 16] {
        std::array::from_fn(|k| {
            let bit = |n: usize| if (k >> n) & 1 == 0 { 1 } else { -1 };
            DeterministicStrategy {
                alice: [bit(0), bit(1)],
                bob: [bit(2), bit(3)],
            }
        })
    }

    /// Cell of `q_ij` this strategy puts its weight on.
    fn cell(&self, i: usize, j: usize) -> usize {
        2 * usize::from(self.alice[i] < 0) + usize::from(self.bob[j] < 0)
    }
}

/// Convex weights over [`DeterministicStrategy::all`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LocalModel {
    pub weights: [f64; 16],
}

impl LocalModel {
    pub fn behavior(&self) -> [[[f64; 4]; 2]; 2] {
        let mut q = [[[0.0; 4]; 2]; 2];
        for (w, s) in self.weights.iter().zip(DeterministicStrategy::all()) {
            for i in 0..2 {
                for j in 0..2 {
                    q[i][j][s.cell(i, j)] += w;
                }
            }
        }
        q
    }

    /// Max deviation from `behavior`, including normalization and positivity.
    pub fn residual(&self, behavior: &BehaviorTable) -> f64 {
        let q = self.behavior();
        let mut worst = (self.weights.iter().sum::<f64>() - 1.0).abs();
        worst = worst.max(-self.weights.iter().copied().fold(0.0, f64::min));
        for i in 0..2 {
            for j in 0..2 {
                for c in 0..4 {
                    worst = worst.max((q[i][j][c] - behavior.get(i, j)[c]).abs());
                }
            }
        }
        worst
    }
}

/// Verdict on whether a behavior admits a local hidden-variable model.
#[derive(Clone, Debug, PartialEq)]
pub struct LhvMembership {
    pub is_local: bool,
    pub max_variant: f64,
    /// The most violated CHSH combination and its value, when non-local.
    pub witness: Option<(ChshVariant, f64)>,
    /// An explicit strategy mixture, when local.
    pub model: Option<LocalModel>,
}

/// Decides locality of a two-setting, two-outcome behavior.
///
/// Local iff every CHSH combination is at most 2. For local behaviors an
/// explicit mixture of the 16 deterministic strategies is found by a phase-one
/// simplex and verified to reproduce the table.
pub fn lhv_membership(behavior: &BehaviorTable) -> Result<LhvMembership> {
    behavior.check_no_signaling()?;
    let chsh = chsh_from_correlators(&behavior.correlators());
    if chsh.max_variant > 2.0 + CHSH_TOL {
        return Ok(LhvMembership {
            is_local: false,
            max_variant: chsh.max_variant,
            witness: Some((chsh.best_variant, chsh.max_variant)),
            model: None,
        });
    }

    let strategies = DeterministicStrategy::all();
    let mut rows = Vec::with_capacity(17);
    let mut rhs = Vec::with_capacity(17);
    for i in 0..2 {
        for j in 0..2 {
            for c in 0..4 {
                rows.push(strategies.iter().map(|s| f64::from(u8::from(s.cell(i, j) == c))).collect());
                rhs.push(behavior.get(i, j)[c]);
            }
        }
    }
    rows.push(vec![1.0; 16]);
    rhs.push(1.0);

    let weights = find_feasible_point(&rows, &rhs, MODEL_RESIDUAL_TOL).ok_or_else(|| {
        Error::InvalidBehavior("CHSH-local behavior has no strategy mixture".into())
    })?;
    let model = LocalModel {
        weights: weights.try_into().expect("16 weights"),
    };
    let residual = model.residual(behavior);
    if residual > MODEL_RESIDUAL_TOL {
        return Err(Error::InvalidBehavior(format!(
            "strategy mixture misses the behavior by {residual:e}"
        )));
    }
    Ok(LhvMembership {
        is_local: true,
        max_variant: chsh.max_variant,
        witness: None,
        model: Some(model),
    })
}
