//! Quasi-stochastic frame representation of one and two qubits.
//!
//! A qubit state is a four-outcome quasi-probability vector over bit pairs
//! `(a, a')`, built from the tetrahedron SIC-POVM. Dynamics and measurements
//! are quasi-stochastic matrices acting on that vector. The [`bell`] module
//! runs the full CHSH analysis on the frame singlet, and [`oracle`] provides
//! an independent density-matrix implementation for cross-checks.
//!
//! ```
//! use qframe::bell::{chsh_value, eta_behavior, tsirelson_settings};
//!
//! let behavior = eta_behavior(&tsirelson_settings()).unwrap();
//! let chsh = chsh_value(&behavior).unwrap();
//! assert!((chsh.max_variant - 2.0 * 2f64.sqrt()).abs() < 1e-12);
//! ```

pub mod bell;
pub mod closed_forms;
pub mod crosscheck;
pub mod error;
pub mod frame;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod process;
pub mod random;
pub mod two_qubit;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};
pub use frame::{BlochVector, OutcomeIndex, QubitFrameState};
pub use process::{MeasurementAxis, Orthogonal3, QuasiStochasticMatrix};
pub use two_qubit::TwoQubitFrameState;

/// Seed used whenever none is given.
pub const DEFAULT_SEED: u64 = 20_140_901;

/// Environment variable that overrides [`DEFAULT_SEED`] in the command-line tool.
pub const SEED_ENV: &str = "QFRAME_SEED";
