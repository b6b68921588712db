//! Searching rotation settings for the largest CHSH value.

use qframe::bell::{optimize_chsh, ChshSettings, OptimizeMethod, OptimizeOptions};

pub fn main() -> qframe::Result<()> {
    let start = ChshSettings::identity();
    let ascent = optimize_chsh(&start, &OptimizeOptions::default())?;
    println!("coordinate ascent: {:.12} after {} evaluations", ascent.value, ascent.evaluations);

    let grid = OptimizeOptions {
        method: OptimizeMethod::Grid { points: 9 },
        restarts: 4,
        max_sweeps: 60,
        ..OptimizeOptions::default()
    };
    let scanned = optimize_chsh(&start, &grid)?;
    println!("grid line search: {:.12} after {} evaluations", scanned.value, scanned.evaluations);
    println!("target 2*sqrt(2) = {:.12}", 2.0 * 2f64.sqrt());
    for i in 0..2 {
        println!("Alice {} measures {:?}", i + 1, ascent.settings.alice_axis(i).as_slice());
    }
    for j in 0..2 {
        println!("Bob {} measures {:?}", j + 1, ascent.settings.bob_axis(j).as_slice());
    }
    Ok(())
}
