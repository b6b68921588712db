//! Bloch vectors and frame probabilities, in both directions.

use nalgebra::Vector3;
use qframe::frame::{validate_state, OutcomeIndex, QubitFrameState};

pub fn main() -> qframe::Result<()> {
    for s in [Vector3::zeros(), Vector3::z(), Vector3::x(), Vector3::new(0.3, -0.4, 0.5)] {
        let p = QubitFrameState::from_bloch(&s)?;
        let probs: Vec<String> = OutcomeIndex::ALL
            .iter()
            .map(|&o| format!("p({o}) = {:.5}", p.prob(o)))
            .collect();
        println!("s = {:?}: {}", s.as_slice(), probs.join(", "));
        let avg = p.bit_averages();
        println!("  <a> = {:.5}, <a'> = {:.5}, <aa'> = {:.5}", avg.mean_a, avg.mean_aprime, avg.mean_aaprime);
    }

    // A simplex vertex is a distribution but not a qubit state.
    let vertex = validate_state(&[1.0, 0.0, 0.0, 0.0]);
    println!("vertex (1,0,0,0): |s| = {:.5}, violations: {:?}", vertex.bloch_norm, vertex.violations());
    Ok(())
}
