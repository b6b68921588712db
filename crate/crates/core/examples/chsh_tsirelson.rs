//! Eta measurements on rotated singlets reach 2√2.

use qframe::bell::{chsh_value, eta_behavior, lhv_membership, tsirelson_settings};

pub fn main() -> qframe::Result<()> {
    let settings = tsirelson_settings();
    let behavior = eta_behavior(&settings)?;
    for i in 0..2 {
        for j in 0..2 {
            println!("q{}{} = {:?}", i + 1, j + 1, behavior.get(i, j));
        }
    }
    let chsh = chsh_value(&behavior)?;
    println!("correlators {:?}", chsh.correlators);
    println!("canonical {:.12}, max variant {:.12} ({})", chsh.canonical, chsh.max_variant, chsh.best_variant.label());
    let verdict = lhv_membership(&behavior)?;
    match verdict.witness {
        Some((variant, value)) => println!("non-local: {} = {value:.12} > 2", variant.label()),
        None => println!("local"),
    }
    Ok(())
}
