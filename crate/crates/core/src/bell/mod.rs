//! Bell-CHSH analysis of the frame singlet.
//!
//! Alice and Bob each pick one of two local rotations, apply it to the shared
//! singlet `p₀`, and then either read out both frame bits (`R`) or measure `η`
//! along a shared axis. Readout statistics always admit a joint distribution
//! ([`fine_joint_readout`]); `η` statistics can violate CHSH up to `2√2`.

mod fine;
mod lhv;
mod optimize;
mod sampling;
mod sweep;

pub use fine::{fine_joint_readout, FineJoint, FineReport};
pub use lhv::{lhv_membership, DeterministicStrategy, LhvMembership, LocalModel, MODEL_RESIDUAL_TOL};
pub use optimize::{optimize_chsh, OptimizeMethod, OptimizeOptions, OptimizeOutcome, OptimizeScope};
pub use sweep::{bob_y_grid, sweep, sweep_csv, SweepPoint, SWEEP_CSV_HEADER};
pub use sampling::{
    estimate_chsh, sample_outcomes, sample_outcomes_with, ChshEstimate, CorrelatorEstimate,
};

use std::f64::consts::FRAC_PI_2;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::frame::{tetra_vectors, OutcomeIndex, FRAME_TOL};
use crate::process::{eta_measurement, rotation_process, MeasurementAxis, Orthogonal3};
use crate::two_qubit::{apply_local, singlet, TwoQubitFrameState};

/// Tolerance on CHSH bounds (`2` and `2√2`).
pub const CHSH_TOL: f64 = 1e-9;

/// Two local rotations per party and the shared measurement axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshSettings {
    pub alice: [Orthogonal3; 2],
    pub bob: [Orthogonal3; 2],
    pub axis: MeasurementAxis,
}

impl ChshSettings {
    pub fn new(alice: [Orthogonal3; 2], bob: [Orthogonal3; 2], axis: MeasurementAxis) -> ChshSettings {
        ChshSettings { alice, bob, axis }
    }

    /// All four rotations equal to the identity, axis `ẑ`.
    pub fn identity() -> ChshSettings {
        ChshSettings::new(
            [Orthogonal3::identity(); 2],
            [Orthogonal3::identity(); 2],
            MeasurementAxis::z(),
        )
    }

    /// `O_Aᵢ â`
    pub fn alice_axis(&self, i: usize) -> Vector3<f64> {
        self.alice[i].apply(self.axis.vector())
    }

    /// `O_Bⱼ â`
    pub fn bob_axis(&self, j: usize) -> Vector3<f64> {
        self.bob[j].apply(self.axis.vector())
    }

    /// The 12 rotation-vector parameters `(A1, A2, B1, B2)`.
    pub fn rotation_parameters(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (k, o) in self.alice.iter().chain(self.bob.iter()).enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(o.scaled_axis().as_slice());
        }
        out
    }

    pub fn from_rotation_parameters(params: &[f64; 12], axis: MeasurementAxis) -> ChshSettings {
        let rot = |k: usize| Orthogonal3::from_scaled_axis(&Vector3::from_column_slice(&params[3 * k..3 * k + 3]));
        ChshSettings::new([rot(0), rot(1)], [rot(2), rot(3)], axis)
    }
}

/// Settings attaining `2√2` with axis `ẑ`: Alice measures along `ẑ, x̂`,
/// Bob along `−(ẑ+x̂)/√2, −(ẑ−x̂)/√2`.
pub fn tsirelson_settings() -> ChshSettings {
    let quarter = std::f64::consts::FRAC_PI_4;
    ChshSettings::new(
        [Orthogonal3::identity(), Orthogonal3::about_y(FRAC_PI_2)],
        [Orthogonal3::about_y(-3.0 * quarter), Orthogonal3::about_y(3.0 * quarter)],
        MeasurementAxis::z(),
    )
}

/// `p₀ⁱʲ(aa',bb') = 1/16 (1 − O_Aᵢ n̂_{aa'} · O_Bⱼ n̂_{bb'})`, indexed `[i][j]`.
pub fn rotated_states(settings: &ChshSettings) -> [[TwoQubitFrameState; 2]; 2] {
    let n = tetra_vectors();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let ra = n.map(|v| settings.alice[i].apply(&v));
            let rb = n.map(|v| settings.bob[j].apply(&v));
            TwoQubitFrameState::from_probs_unchecked(std::array::from_fn(|k| {
                (1.0 - ra[k / 4].dot(&rb[k % 4])) / 16.0
            }))
        })
    })
}

/// The same states computed by contracting rotation processes with `p₀`.
///
/// `rotation_process(O)` maps `s → O s`, which moves the frame vectors by
/// `Oᵀ`. Setting `i` therefore applies `rotation_process(O_Aᵢᵀ)`, so that the
/// contraction lands on the `O_Aᵢ n̂` form of [`rotated_states`].
pub fn rotated_states_by_contraction(settings: &ChshSettings) -> Result<[[TwoQubitFrameState; 2]; 2]> {
    let p0 = singlet();
    let alice = settings.alice.map(|o| rotation_process(&o.transpose()));
    let bob = settings.bob.map(|o| rotation_process(&o.transpose()));
    let mut out = Vec::with_capacity(4);
    for sa in &alice {
        for sb in &bob {
            out.push(apply_local(sa, sb, &p0)?.into_state()?);
        }
    }
    let mut it = out.into_iter();
    let mut next = || it.next().expect("four states");
    Ok([[next(), next()], [next(), next()]])
}

/// Conditional distributions `q_ij(ab)`, each ordered `(++, +−, −+, −−)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BehaviorTable {
    q: [[[f64; 4]; 2]; 2],
}

impl BehaviorTable {
    /// Checks normalization and positivity of each `q_ij`.
    pub fn new(q: [[[f64; 4]; 2]; 2]) -> Result<BehaviorTable> {
        for (i, row) in q.iter().enumerate() {
            for (j, dist) in row.iter().enumerate() {
                let sum: f64 = dist.iter().sum();
                if (sum - 1.0).abs() > FRAME_TOL {
                    return Err(Error::InvalidBehavior(format!("q_{}{} sums to {sum}", i + 1, j + 1)));
                }
                if let Some(x) = dist.iter().find(|&&x| x < -FRAME_TOL) {
                    return Err(Error::InvalidBehavior(format!("q_{}{} has entry {x:e}", i + 1, j + 1)));
                }
            }
        }
        Ok(BehaviorTable { q })
    }

    /// Uniform `q_ij = ¼`.
    pub fn uniform() -> BehaviorTable {
        BehaviorTable { q: [[[0.25; 4]; 2]; 2] }
    }

    /// Product behavior of fixed outcomes `A_i = alice[i]`, `B_j = bob[j]`.
    pub fn deterministic(alice: [i8; 2], bob: [i8; 2]) -> BehaviorTable {
        let q = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut d = [0.0; 4];
                d[2 * usize::from(alice[i] < 0) + usize::from(bob[j] < 0)] = 1.0;
                d
            })
        });
        BehaviorTable { q }
    }

    pub fn table(&self) -> &[[[f64; 4]; 2]; 2] {
        &self.q
    }

    pub fn get(&self, i: usize, j: usize) -> &[f64; 4] {
        &self.q[i][j]
    }

    /// `E_ij = q(++) + q(−−) − q(+−) − q(−+)`
    pub fn correlator(&self, i: usize, j: usize) -> f64 {
        let q = &self.q[i][j];
        q[0] + q[3] - q[1] - q[2]
    }

    pub fn correlators(&self) -> [[f64; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.correlator(i, j)))
    }

    /// Largest violation of the no-signaling conditions.
    pub fn signaling_residual(&self) -> f64 {
        let alice = |i: usize, j: usize| [self.q[i][j][0] + self.q[i][j][1], self.q[i][j][2] + self.q[i][j][3]];
        let bob = |i: usize, j: usize| [self.q[i][j][0] + self.q[i][j][2], self.q[i][j][1] + self.q[i][j][3]];
        let mut worst = 0.0_f64;
        for k in 0..2 {
            let (a0, a1) = (alice(k, 0), alice(k, 1));
            let (b0, b1) = (bob(0, k), bob(1, k));
            for t in 0..2 {
                worst = worst.max((a0[t] - a1[t]).abs()).max((b0[t] - b1[t]).abs());
            }
        }
        worst
    }

    pub fn check_no_signaling(&self) -> Result<()> {
        let residual = self.signaling_residual();
        if residual > FRAME_TOL {
            return Err(Error::SignalingDetected { residual });
        }
        Ok(())
    }
}

/// `η ⊗ η` statistics of the rotated singlets, by brute-force contraction.
///
/// The result equals `¼(1 − ab (O_Aᵢ â)·(O_Bⱼ â))`.
pub fn eta_behavior(settings: &ChshSettings) -> Result<BehaviorTable> {
    let eta = eta_measurement(&settings.axis);
    let states = rotated_states(settings);
    let mut q = [[[0.0; 4]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let out = apply_local(&eta, &eta, &states[i][j])?;
            q[i][j].copy_from_slice(&out.probs);
        }
    }
    BehaviorTable::new(q)
}

/// Closed form `¼(1 − ab (O_Aᵢ â)·(O_Bⱼ â))` of [`eta_behavior`].
pub fn eta_behavior_closed_form(settings: &ChshSettings) -> BehaviorTable {
    let q = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let c = settings.alice_axis(i).dot(&settings.bob_axis(j));
            [0.25 * (1.0 - c), 0.25 * (1.0 + c), 0.25 * (1.0 + c), 0.25 * (1.0 - c)]
        })
    });
    BehaviorTable { q }
}

/// One of the eight CHSH combinations
/// `sign · (E₁₁ + E₁₂ + E₂₁ + E₂₂ − 2 E_minus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ChshVariant {
    /// Zero-based `(i, j)` of the term carrying the minus sign.
    pub minus_at: (usize, usize),
    /// `+1` or `−1` applied to the whole combination.
    pub sign: i8,
}

impl ChshVariant {
    pub const CANONICAL: ChshVariant = ChshVariant {
        minus_at: (1, 1),
        sign: 1,
    };

    pub fn all() -> impl Iterator<Item = ChshVariant> {
        [1i8, -1].into_iter().flat_map(|sign| {
            (0..4).map(move |k| ChshVariant {
                minus_at: (k / 2, k % 2),
                sign,
            })
        })
    }

    pub fn evaluate(&self, e: &[[f64; 2]; 2]) -> f64 {
        let (i, j) = self.minus_at;
        let total = e[0][0] + e[0][1] + e[1][0] + e[1][1] - 2.0 * e[i][j];
        f64::from(self.sign) * total
    }

    /// e.g. `"-(E11 + E12 + E21 - E22)"`.
    pub fn label(&self) -> String {
        let terms: Vec<String> = (0..4)
            .map(|k| {
                let (i, j) = (k / 2, k % 2);
                let op = if (i, j) == self.minus_at { "-" } else { "+" };
                format!("{op} E{}{}", i + 1, j + 1)
            })
            .collect();
        let body = terms.join(" ");
        let body = body.trim_start_matches("+ ").to_string();
        if self.sign > 0 {
            body
        } else {
            format!("-({body})")
        }
    }
}

/// Correlators and CHSH combinations of a behavior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshResult {
    pub correlators: [[f64; 2]; 2],
    /// `E₁₁ + E₁₂ + E₂₁ − E₂₂`
    pub canonical: f64,
    pub max_variant: f64,
    pub best_variant: ChshVariant,
}

pub fn chsh_from_correlators(e: &[[f64; 2]; 2]) -> ChshResult {
    let (best_variant, max_variant) = ChshVariant::all()
        .map(|v| (v, v.evaluate(e)))
        .fold((ChshVariant::CANONICAL, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
    ChshResult {
        correlators: *e,
        canonical: ChshVariant::CANONICAL.evaluate(e),
        max_variant,
        best_variant,
    }
}

pub fn chsh_value(behavior: &BehaviorTable) -> Result<ChshResult> {
    let e = behavior.correlators();
    if let Some(x) = e.iter().flatten().find(|x| x.abs() > 1.0 + FRAME_TOL) {
        return Err(Error::InvalidBehavior(format!("correlator {x} outside [-1, 1]")));
    }
    Ok(chsh_from_correlators(&e))
}

/// A ±1 observable read off the revealed bit pair `(a, a')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameBit {
    /// `a`
    First,
    /// `a'`
    Second,
    /// `a·a'`
    Product,
}

impl FrameBit {
    pub const ALL: [FrameBit; 3] = [FrameBit::First, FrameBit::Second, FrameBit::Product];

    pub fn value(self, o: OutcomeIndex) -> f64 {
        let (a, aprime) = o.bits();
        let v = match self {
            FrameBit::First => a.value(),
            FrameBit::Second => aprime.value(),
            FrameBit::Product => a.value() * aprime.value(),
        };
        f64::from(v)
    }
}

/// Behavior of the readout `R` on both sides, coarse-grained to one bit.
///
/// `q_ij(xy)` sums `p₀ⁱʲ(α, β)` over the frame outcomes whose `bit` equals
/// `x` for Alice and `y` for Bob.
pub fn readout_behavior(settings: &ChshSettings, bit: FrameBit) -> Result<BehaviorTable> {
    let states = rotated_states(settings);
    let mut q = [[[0.0; 4]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for alpha in OutcomeIndex::ALL {
                for beta in OutcomeIndex::ALL {
                    let x = usize::from(bit.value(alpha) < 0.0);
                    let y = usize::from(bit.value(beta) < 0.0);
                    q[i][j][2 * x + y] += states[i][j].prob(alpha, beta);
                }
            }
        }
    }
    BehaviorTable::new(q)
}
