//! JSON documents for states, processes, settings and complex matrices.
//!
//! Each `*Doc` type is the raw serde shape. Converting it into a domain value
//! runs the same validation as the library constructors.

use nalgebra::{Complex, Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bell::ChshSettings;
use crate::error::{Error, Result};
use crate::frame::{QubitFrameState, FRAME_TOL};
use crate::oracle::ComplexMatrix;
use crate::process::{
    affine_channel_process, direct_readout, eta_measurement, general_measurement_process, rotation_from_process,
    rotation_process, AffineChannel, GeneralMeasurement, MeasurementAxis, Orthogonal3, QuasiStochasticMatrix,
    ROTATION_MATCH_TOL,
};
use crate::two_qubit::{CorrelationMatrix, TwoQubitFrameState};

type Rows3 = [[f64; 3]; 3];

fn matrix3(rows: &Rows3) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| rows[i][j])
}

fn rows3(m: &Matrix3<f64>) -> Rows3 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn vec3(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// `{"probs":[4]}`, `{"bloch":[3]}`, `{"probs":[16]}` or `{"sA","sB","T"}`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub probs: Option<Vec<f64>>,
    pub bloch: Option<[f64; 3]>,
    #[serde(rename = "sA")]
    pub s_a: Option<[f64; 3]>,
    #[serde(rename = "sB")]
    pub s_b: Option<[f64; 3]>,
    #[serde(rename = "T")]
    pub t: Option<Rows3>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Qubit(QubitFrameState),
    TwoQubit(TwoQubitFrameState),
}

impl StateDoc {
    /// When both a probability vector and parameters are given they must agree.
    pub fn into_state(self) -> Result<AnyState> {
        let params = match (self.s_a, self.s_b, self.t) {
            (None, None, None) => None,
            (Some(a), Some(b), Some(t)) => Some(TwoQubitFrameState::from_params(
                &Vector3::from(a),
                &Vector3::from(b),
                &CorrelationMatrix::new(matrix3(&t))?,
            )?),
            _ => return Err(Error::InvalidInput("two-qubit parameters need sA, sB and T".into())),
        };
        let from_bloch = self.bloch.map(|s| QubitFrameState::from_bloch(&Vector3::from(s))).transpose()?;
        let from_probs = match self.probs.as_deref() {
            None => None,
            Some(p) if p.len() == 4 => Some(AnyState::Qubit(QubitFrameState::from_slice(p)?)),
            Some(p) if p.len() == 16 => Some(AnyState::TwoQubit(TwoQubitFrameState::from_slice(p)?)),
            Some(p) => {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    found: p.len(),
                })
            }
        };
        let mismatch = |what: &str| Error::InvalidInput(format!("probs disagree with {what}"));
        match (from_probs, from_bloch, params) {
            (Some(AnyState::Qubit(p)), Some(b), None) => {
                if max_diff(p.probs(), b.probs()) > FRAME_TOL {
                    return Err(mismatch("bloch"));
                }
                Ok(AnyState::Qubit(p))
            }
            (Some(AnyState::TwoQubit(p)), None, Some(q)) => {
                if p.max_abs_diff(&q) > FRAME_TOL {
                    return Err(mismatch("sA, sB, T"));
                }
                Ok(AnyState::TwoQubit(p))
            }
            (Some(state), None, None) => Ok(state),
            (None, Some(b), None) => Ok(AnyState::Qubit(b)),
            (None, None, Some(q)) => Ok(AnyState::TwoQubit(q)),
            (None, None, None) => Err(Error::InvalidInput("state needs probs, bloch or sA/sB/T".into())),
            _ => Err(Error::InvalidInput("one-qubit and two-qubit fields mixed".into())),
        }
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn qubit_state_json(p: &QubitFrameState) -> Value {
    json!({ "probs": p.probs(), "bloch": vec3(&p.bloch()) })
}

pub fn two_qubit_state_json(p: &TwoQubitFrameState) -> Value {
    let params = p.params();
    json!({
        "probs": p.probs().to_vec(),
        "sA": vec3(&params.s_a),
        "sB": vec3(&params.s_b),
        "T": rows3(&params.t),
    })
}

pub fn state_json(state: &AnyState) -> Value {
    match state {
        AnyState::Qubit(p) => qubit_state_json(p),
        AnyState::TwoQubit(p) => two_qubit_state_json(p),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Rotation,
    Affine,
    Eta,
    Readout,
    General,
}

/// `{"kind", "matrix", "params"}`; matrices are row-major.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessDoc {
    pub kind: ProcessKind,
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub params: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RotationParams {
    matrix: Option<Rows3>,
    axis: Option<[f64; 3]>,
    angle: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineParams {
    lambda: Rows3,
    #[serde(default)]
    offset: [f64; 3],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EtaParams {
    axis: [f64; 3],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralParams {
    m: Vec<[f64; 3]>,
    w: [[f64; 3]; 4],
}

fn params<T: serde::de::DeserializeOwned>(value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::InvalidInput(format!("params: {e}")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Process {
    pub kind: ProcessKind,
    pub matrix: QuasiStochasticMatrix,
    pub params: Value,
}

impl Process {
    pub fn rotation(o: &Orthogonal3) -> Process {
        Process {
            kind: ProcessKind::Rotation,
            matrix: rotation_process(o),
            params: json!({ "matrix": o.to_rows() }),
        }
    }

    pub fn eta(axis: &MeasurementAxis) -> Process {
        Process {
            kind: ProcessKind::Eta,
            matrix: eta_measurement(axis),
            params: json!({ "axis": vec3(axis.vector()) }),
        }
    }

    pub fn readout() -> Process {
        Process {
            kind: ProcessKind::Readout,
            matrix: direct_readout(),
            params: json!({}),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "kind": self.kind, "matrix": self.matrix.to_rows(), "params": self.params })
    }
}

impl ProcessDoc {
    /// Builds the matrix from `params` when present, otherwise takes `matrix`
    /// as given. With both, they must agree entrywise.
    pub fn into_process(self) -> Result<Process> {
        let given = self.matrix.as_deref().map(QuasiStochasticMatrix::from_rows).transpose()?;
        let built = match self.params.clone() {
            None | Some(Value::Null) => None,
            Some(value) => Some(build(self.kind, value)?),
        };
        let process = match (given, built) {
            (Some(m), Some(p)) => {
                if m.n_outputs() != p.matrix.n_outputs()
                    || m.n_inputs() != p.matrix.n_inputs()
                    || m.max_abs_diff(&p.matrix) > ROTATION_MATCH_TOL
                {
                    return Err(Error::InvalidInput("matrix disagrees with params".into()));
                }
                Process { matrix: m, ..p }
            }
            (None, Some(p)) => p,
            (Some(m), None) => {
                let params = match self.kind {
                    ProcessKind::Rotation => json!({ "matrix": rotation_from_process(&m)?.to_rows() }),
                    _ => json!({}),
                };
                Process {
                    kind: self.kind,
                    matrix: m,
                    params,
                }
            }
            (None, None) if self.kind == ProcessKind::Readout => Process::readout(),
            (None, None) => return Err(Error::InvalidInput("process needs matrix or params".into())),
        };
        Ok(process)
    }
}

fn build(kind: ProcessKind, value: Value) -> Result<Process> {
    let params_out = value.clone();
    let matrix = match kind {
        ProcessKind::Rotation => {
            let p: RotationParams = params(value)?;
            let o = match (p.matrix, p.axis, p.angle) {
                (Some(m), None, None) => Orthogonal3::from_rows(&m)?,
                (None, Some(axis), Some(angle)) => Orthogonal3::from_axis_angle(&Vector3::from(axis), angle)?,
                _ => return Err(Error::InvalidInput("rotation needs matrix, or axis and angle".into())),
            };
            rotation_process(&o)
        }
        ProcessKind::Affine => {
            let p: AffineParams = params(value)?;
            affine_channel_process(&AffineChannel::new(matrix3(&p.lambda), Vector3::from(p.offset))?)
        }
        ProcessKind::Eta => {
            let p: EtaParams = params(value)?;
            eta_measurement(&MeasurementAxis::new(Vector3::from(p.axis))?)
        }
        ProcessKind::Readout => direct_readout(),
        ProcessKind::General => {
            let p: GeneralParams = params(value)?;
            let n_bits = p.m.len().trailing_zeros() as usize;
            let m = p.m.iter().map(|v| Vector3::from(*v)).collect();
            general_measurement_process(&GeneralMeasurement::new(n_bits, m, p.w.map(Vector3::from))?)
        }
    };
    Ok(Process {
        kind,
        matrix,
        params: params_out,
    })
}

/// `{"O_A1", "O_A2", "O_B1", "O_B2", "axis"}`; the axis defaults to `ẑ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsDoc {
    #[serde(rename = "O_A1")]
    pub o_a1: Rows3,
    #[serde(rename = "O_A2")]
    pub o_a2: Rows3,
    #[serde(rename = "O_B1")]
    pub o_b1: Rows3,
    #[serde(rename = "O_B2")]
    pub o_b2: Rows3,
    #[serde(default = "z_axis")]
    pub axis: [f64; 3],
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

impl SettingsDoc {
    pub fn into_settings(self) -> Result<ChshSettings> {
        Ok(ChshSettings::new(
            [Orthogonal3::from_rows(&self.o_a1)?, Orthogonal3::from_rows(&self.o_a2)?],
            [Orthogonal3::from_rows(&self.o_b1)?, Orthogonal3::from_rows(&self.o_b2)?],
            MeasurementAxis::new(Vector3::from(self.axis))?,
        ))
    }
}

impl From<&ChshSettings> for SettingsDoc {
    fn from(s: &ChshSettings) -> SettingsDoc {
        SettingsDoc {
            o_a1: s.alice[0].to_rows(),
            o_a2: s.alice[1].to_rows(),
            o_b1: s.bob[0].to_rows(),
            o_b2: s.bob[1].to_rows(),
            axis: vec3(s.axis.vector()),
        }
    }
}

/// `{"re":[[...]], "im":[[...]]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrixDoc {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ComplexMatrixDoc {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        let n = self.re.len();
        let square = |rows: &[Vec<f64>]| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !square(&self.re) || !square(&self.im) {
            return Err(Error::InvalidInput("complex matrix must be square with matching re and im".into()));
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| Complex::new(self.re[i][j], self.im[i][j])))
    }
}

impl From<&ComplexMatrix> for ComplexMatrixDoc {
    fn from(m: &ComplexMatrix) -> ComplexMatrixDoc {
        let rows = |f: fn(&Complex<f64>) -> f64| {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
        };
        ComplexMatrixDoc {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}
