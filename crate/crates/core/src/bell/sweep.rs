use std::f64::consts::TAU;

use rayon::prelude::*;

use super::ChshSettings;
use crate::error::Result;
use crate::process::Orthogonal3;

pub const SWEEP_CSV_HEADER: &str =
    "a1_x,a1_y,a1_z,a2_x,a2_y,a2_z,b1_x,b1_y,b1_z,b2_x,b2_y,b2_z,value";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    /// Rotation vectors of `(A1, A2, B1, B2)`.
    pub parameters: [f64; 12],
    pub value: f64,
}

/// `grid × grid` settings: Alice from `base`, Bob rotated about `ŷ` by
/// `2πk/grid` for each of his two settings. Row-major in `(k₁, k₂)`.
pub fn bob_y_grid(base: &ChshSettings, grid: usize) -> Vec<ChshSettings> {
    let angle = |k: usize| TAU * k as f64 / grid as f64;
    (0..grid)
        .flat_map(|k1| (0..grid).map(move |k2| (k1, k2)))
        .map(|(k1, k2)| {
            ChshSettings::new(
                base.alice,
                [Orthogonal3::about_y(angle(k1)), Orthogonal3::about_y(angle(k2))],
                base.axis,
            )
        })
        .collect()
}

/// Evaluates `value` on every setting in parallel, keeping input order.
pub fn sweep<F>(settings: &[ChshSettings], value: F) -> Result<Vec<SweepPoint>>
where
    F: Fn(&ChshSettings) -> Result<f64> + Sync,
{
    settings
        .par_iter()
        .map(|s| {
            Ok(SweepPoint {
                parameters: s.rotation_parameters(),
                value: value(s)?,
            })
        })
        .collect()
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        let row: Vec<String> = p.parameters.iter().chain([&p.value]).map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
