//! The single-qubit SIC-POVM frame.
//!
//! A qubit is carried by two classical bits `a, a' = ±1`. Their joint
//! distribution is `p(aa') = ¼(1 + s·n̂_{aa'})` where `s` is the Bloch vector and
//! `n̂_{aa'} = (a, a', aa')/√3` are the four tetrahedron directions.
//!
//! Outcomes are indexed in the fixed order `(++, +−, −+, −−)`, i.e.
//! `index = 2·[a = −1] + [a' = −1]`.

use std::fmt;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Tolerance used for normalization, positivity and Bloch-ball membership of
/// analytically constructed objects.
pub const FRAME_TOL: f64 = 1e-12;

pub type BlochVector = Vector3<f64>;

/// A classical bit taking the values `+1` or `−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Plus,
    Minus,
}

impl Bit {
    pub const BOTH: [Bit; 2] = [Bit::Plus, Bit::Minus];

    pub fn from_value(value: i64) -> Result<Bit> {
        match value {
            1 => Ok(Bit::Plus),
            -1 => Ok(Bit::Minus),
            other => Err(Error::InvalidInput(format!("bit must be +1 or -1, got {other}"))),
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Bit::Plus => 1,
            Bit::Minus => -1,
        }
    }

    pub fn sign(self) -> f64 {
        f64::from(self.value())
    }

    /// 0 for `+1`, 1 for `−1`.
    pub fn index(self) -> usize {
        match self {
            Bit::Plus => 0,
            Bit::Minus => 1,
        }
    }

    pub fn flip(self) -> Bit {
        match self {
            Bit::Plus => Bit::Minus,
            Bit::Minus => Bit::Plus,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bit::Plus => "+",
            Bit::Minus => "-",
        })
    }
}

/// Index of a bit pair `(a, a')` in the order `(++, +−, −+, −−)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeIndex(u8);

impl OutcomeIndex {
    pub const ALL: [OutcomeIndex; 4] = [
        OutcomeIndex(0),
        OutcomeIndex(1),
        OutcomeIndex(2),
        OutcomeIndex(3),
    ];

    pub fn new(index: usize) -> Option<OutcomeIndex> {
        (index < 4).then_some(OutcomeIndex(index as u8))
    }

    pub fn from_bits(a: Bit, aprime: Bit) -> OutcomeIndex {
        OutcomeIndex((2 * a.index() + aprime.index()) as u8)
    }

    pub fn bits(self) -> (Bit, Bit) {
        let a = if self.0 & 2 == 0 { Bit::Plus } else { Bit::Minus };
        let aprime = if self.0 & 1 == 0 { Bit::Plus } else { Bit::Minus };
        (a, aprime)
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    /// The tetrahedron vector `n̂_{aa'}` attached to this outcome.
    pub fn tetra(self) -> Vector3<f64> {
        let (a, aprime) = self.bits();
        tetra_vector(a, aprime)
    }
}

impl fmt::Display for OutcomeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, aprime) = self.bits();
        write!(f, "{a}{aprime}")
    }
}

/// `n̂_{aa'} = (a, a', a·a')/√3`.
pub fn tetra_vector(a: Bit, aprime: Bit) -> Vector3<f64> {
    let (x, y) = (a.sign(), aprime.sign());
    Vector3::new(x, y, x * y) / 3f64.sqrt()
}

/// All four tetrahedron vectors, in outcome order.
pub fn tetra_vectors() -> [Vector3<f64>; 4] {
    OutcomeIndex::ALL.map(OutcomeIndex::tetra)
}

/// `Σ n̂ n̂ᵀ`, which equals `(4/3)·I`.
pub fn tetra_frame_operator() -> Matrix3<f64> {
    tetra_vectors()
        .iter()
        .fold(Matrix3::zeros(), |acc, n| acc + n * n.transpose())
}

/// Bloch vector `s = 3·Σ p(aa') n̂_{aa'}` of an arbitrary (unvalidated) 4-vector.
pub fn bloch_from_probs(probs: &[f64; 4]) -> Vector3<f64> {
    OutcomeIndex::ALL
        .iter()
        .fold(Vector3::zeros(), |acc, o| acc + o.tetra() * probs[o.index()])
        * 3.0
}

/// Per-layer diagnostics for a candidate single-qubit frame state.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ValidityReport {
    pub normalization_error: f64,
    pub min_entry: f64,
    pub bloch_norm: f64,
}

impl ValidityReport {
    pub fn is_normalized(&self) -> bool {
        self.normalization_error <= FRAME_TOL
    }

    pub fn is_positive(&self) -> bool {
        self.min_entry >= -FRAME_TOL
    }

    pub fn in_bloch_ball(&self) -> bool {
        self.bloch_norm <= 1.0 + FRAME_TOL
    }

    pub fn is_valid(&self) -> bool {
        self.is_normalized() && self.is_positive() && self.in_bloch_ball()
    }

    /// Human-readable list of the layers that failed.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_normalized() {
            out.push(format!("normalization error {:e}", self.normalization_error));
        }
        if !self.is_positive() {
            out.push(format!("negative entry {:e}", self.min_entry));
        }
        if !self.in_bloch_ball() {
            out.push(format!("|s| = {} outside Bloch ball", self.bloch_norm));
        }
        out
    }
}

/// Checks normalization, entrywise positivity and Bloch-ball membership.
///
/// Positivity alone is not enough: the simplex vertex `(1,0,0,0)` is positive
/// but its Bloch vector has length √3.
pub fn validate_state(probs: &[f64; 4]) -> ValidityReport {
    let sum: f64 = probs.iter().sum();
    let min_entry = probs.iter().copied().fold(f64::INFINITY, f64::min);
    ValidityReport {
        normalization_error: (sum - 1.0).abs(),
        min_entry,
        bloch_norm: bloch_from_probs(probs).norm(),
    }
}

/// A valid single-qubit frame state: a positive distribution over the four
/// outcomes whose Bloch vector lies in the unit ball.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitFrameState {
    probs: [f64; 4],
}

impl QubitFrameState {
    pub fn from_bloch(s: &BlochVector) -> Result<QubitFrameState> {
        let norm = s.norm();
        if norm > 1.0 + FRAME_TOL {
            return Err(Error::BlochOutOfBall { norm });
        }
        let probs = OutcomeIndex::ALL.map(|o| 0.25 * (1.0 + s.dot(&o.tetra())));
        Ok(QubitFrameState { probs })
    }

    pub fn from_probs(probs: [f64; 4]) -> Result<QubitFrameState> {
        let report = validate_state(&probs);
        if report.is_valid() {
            Ok(QubitFrameState { probs })
        } else {
            Err(Error::InvalidState(report.violations().join("; ")))
        }
    }

    pub fn from_slice(probs: &[f64]) -> Result<QubitFrameState> {
        let probs: [f64; 4] = probs.try_into().map_err(|_| Error::DimensionMismatch {
            expected: 4,
            found: probs.len(),
        })?;
        QubitFrameState::from_probs(probs)
    }

    pub fn maximally_mixed() -> QubitFrameState {
        QubitFrameState { probs: [0.25; 4] }
    }

    pub fn probs(&self) -> &[f64; 4] {
        &self.probs
    }

    pub fn prob(&self, outcome: OutcomeIndex) -> f64 {
        self.probs[outcome.index()]
    }

    pub fn bloch(&self) -> BlochVector {
        bloch_from_probs(&self.probs)
    }

    pub fn bit_averages(&self) -> BitAverages {
        let mut avg = BitAverages::default();
        for o in OutcomeIndex::ALL {
            let (a, aprime) = o.bits();
            let p = self.prob(o);
            avg.mean_a += a.sign() * p;
            avg.mean_aprime += aprime.sign() * p;
            avg.mean_aaprime += a.sign() * aprime.sign() * p;
        }
        avg
    }
}

/// Averages `⟨A⟩, ⟨A'⟩, ⟨AA'⟩` of the two frame bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct BitAverages {
    pub mean_a: f64,
    pub mean_aprime: f64,
    pub mean_aaprime: f64,
}

impl BitAverages {
    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.mean_a, self.mean_aprime, self.mean_aaprime)
    }
}

pub fn state_from_bloch(s: &BlochVector) -> Result<QubitFrameState> {
    QubitFrameState::from_bloch(s)
}

pub fn bloch_from_state(p: &QubitFrameState) -> BlochVector {
    p.bloch()
}

pub fn bit_averages(p: &QubitFrameState) -> BitAverages {
    p.bit_averages()
}
