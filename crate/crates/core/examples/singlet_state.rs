//! The frame singlet: white-noise marginals, no matching pairs, rotation invariance.

use qframe::frame::OutcomeIndex;
use qframe::process::rotation_process;
use qframe::random::{random_orthogonal, rng_from_seed};
use qframe::two_qubit::{apply_local, singlet};

pub fn main() -> qframe::Result<()> {
    let p0 = singlet();
    for a in OutcomeIndex::ALL {
        let row: Vec<String> = OutcomeIndex::ALL.iter().map(|&b| format!("{:.5}", p0.prob(a, b))).collect();
        println!("{a}: {}", row.join(" "));
    }
    println!("marginal A: {:?}", p0.marginal_a()?.probs());
    let params = p0.params();
    println!("T = {:.6}", params.t);

    let mut rng = rng_from_seed(qframe::DEFAULT_SEED);
    for _ in 0..3 {
        let o = random_orthogonal(&mut rng);
        let s = rotation_process(&o);
        let moved = apply_local(&s, &s, &p0)?.into_state()?;
        println!("det O = {:+.0}: deviation {:.2e}", o.determinant(), moved.max_abs_diff(&p0));
    }
    Ok(())
}
