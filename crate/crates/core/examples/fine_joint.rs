//! The readout always admits a positive joint distribution of all four bit pairs.

use qframe::bell::{fine_joint_readout, tsirelson_settings};
use qframe::random::{random_settings, rng_from_seed};

pub fn main() -> qframe::Result<()> {
    let settings = tsirelson_settings();
    let joint = fine_joint_readout(&settings)?;
    let report = joint.report(&settings);
    println!("Tsirelson settings: {report:?}");
    println!("p(++,++;+-,-+) = {:.6}", joint.entry(0, 0, 1, 2));

    let mut rng = rng_from_seed(1);
    let worst = (0..200)
        .map(|_| {
            let s = random_settings(&mut rng);
            fine_joint_readout(&s).map(|j| j.report(&s).max_marginal_residual)
        })
        .collect::<qframe::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("200 random settings: worst marginal residual {worst:.2e}");
    Ok(())
}
