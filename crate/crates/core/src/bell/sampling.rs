use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{chsh_from_correlators, BehaviorTable, ChshResult};
use crate::error::{Error, Result};
use crate::frame::FRAME_TOL;

fn checked_cdf(dist: &[f64]) -> Result<Vec<f64>> {
    if dist.is_empty() {
        return Err(Error::InvalidInput("empty distribution".into()));
    }
    let mut acc = 0.0;
    let mut cdf = Vec::with_capacity(dist.len());
    for (index, &p) in dist.iter().enumerate() {
        if p < -FRAME_TOL || !p.is_finite() {
            return Err(Error::NegativeDistribution { index, value: p });
        }
        acc += p.max(0.0);
        cdf.push(acc);
    }
    if acc <= 0.0 {
        return Err(Error::InvalidInput("distribution has no mass".into()));
    }
    Ok(cdf)
}

/// Draws `n` outcomes by inverse-CDF sampling and returns per-outcome counts.
///
/// Quasi-distributions with entries below `−1e−12` are rejected; smaller
/// negative rounding noise is treated as zero.
pub fn sample_outcomes_with<R: Rng + ?Sized>(dist: &[f64], n: u64, rng: &mut R) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    let cdf = checked_cdf(dist)?;
    let total = *cdf.last().expect("non-empty");
    let last_live = dist.iter().rposition(|&p| p > 0.0).expect("positive mass");
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..n {
        let u = rng.random::<f64>() * total;
        let k = cdf.iter().position(|&c| u < c).unwrap_or(last_live);
        counts[k] += 1;
    }
    Ok(counts)
}

/// Seeded version of [`sample_outcomes_with`].
pub fn sample_outcomes(dist: &[f64], n: u64, seed: u64) -> Result<Vec<u64>> {
    sample_outcomes_with(dist, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CorrelatorEstimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChshEstimate {
    pub samples_per_setting: u64,
    pub counts: [[[u64; 4]; 2]; 2],
    pub correlators: [[CorrelatorEstimate; 2]; 2],
    pub chsh: ChshResult,
    /// Standard error of any single CHSH combination.
    pub std_error: f64,
}

/// Samples each `q_ij` `n` times and estimates the correlators.
///
/// Setting `(i, j)` draws from ChaCha stream `2i + j` of `seed`, so the four
/// settings are independent and can be reproduced one by one.
pub fn estimate_chsh(behavior: &BehaviorTable, n: u64, seed: u64) -> Result<ChshEstimate> {
    let mut counts = [[[0u64; 4]; 2]; 2];
    let mut correlators = [[CorrelatorEstimate { value: 0.0, std_error: 0.0 }; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((2 * i + j) as u64);
            let c = sample_outcomes_with(behavior.get(i, j), n, &mut rng)?;
            counts[i][j].copy_from_slice(&c);
            let e = (c[0] as f64 + c[3] as f64 - c[1] as f64 - c[2] as f64) / n as f64;
            correlators[i][j] = CorrelatorEstimate {
                value: e,
                std_error: ((1.0 - e * e).max(0.0) / n as f64).sqrt(),
            };
        }
    }
    let e = correlators.map(|row| row.map(|c| c.value));
    let std_error = correlators.iter().flatten().map(|c| c.std_error.powi(2)).sum::<f64>().sqrt();
    Ok(ChshEstimate {
        samples_per_setting: n,
        counts,
        correlators,
        chsh: chsh_from_correlators(&e),
        std_error,
    })
}
