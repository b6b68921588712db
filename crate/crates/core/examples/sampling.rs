//! Finite-sample CHSH estimates and singlet outcome sampling.

use qframe::bell::{estimate_chsh, eta_behavior, sample_outcomes, tsirelson_settings};
use qframe::two_qubit::singlet;

pub fn main() -> qframe::Result<()> {
    let behavior = eta_behavior(&tsirelson_settings())?;
    for n in [1_000, 10_000, 100_000, 1_000_000] {
        let est = estimate_chsh(&behavior, n, qframe::DEFAULT_SEED)?;
        println!("n = {n:>9}: CHSH {:.5} ± {:.5}", est.chsh.max_variant, est.std_error);
    }

    let counts = sample_outcomes(singlet().probs(), 1_000_000, qframe::DEFAULT_SEED)?;
    let matching: u64 = (0..4).map(|k| counts[5 * k]).sum();
    println!("singlet: {matching} matching pairs in 10^6 draws");
    Ok(())
}
