//! Local behaviors decompose into deterministic strategies; non-local ones get a witness.

use qframe::bell::{eta_behavior, lhv_membership, BehaviorTable, ChshSettings, DeterministicStrategy};
use qframe::process::Orthogonal3;

pub fn main() -> qframe::Result<()> {
    let mut settings = ChshSettings::identity();
    settings.bob[1] = Orthogonal3::about_y(1.0);
    let local = eta_behavior(&settings)?;
    let verdict = lhv_membership(&local)?;
    println!("max variant {:.6}, local {}", verdict.max_variant, verdict.is_local);
    if let Some(model) = &verdict.model {
        for (s, w) in DeterministicStrategy::all().iter().zip(model.weights) {
            if w > 1e-12 {
                println!("  A = {:?}, B = {:?}: weight {w:.6}", s.alice, s.bob);
            }
        }
        println!("residual {:.2e}", model.residual(&local));
    }

    let vertex = BehaviorTable::deterministic([1, -1], [1, 1]);
    println!("deterministic vertex local: {}", lhv_membership(&vertex)?.is_local);

    let pr = BehaviorTable::new([
        [[0.5, 0.0, 0.0, 0.5], [0.5, 0.0, 0.0, 0.5]],
        [[0.5, 0.0, 0.0, 0.5], [0.0, 0.5, 0.5, 0.0]],
    ])?;
    let verdict = lhv_membership(&pr)?;
    println!("PR box: witness {:?}", verdict.witness.map(|(v, x)| (v.label(), x)));
    Ok(())
}
