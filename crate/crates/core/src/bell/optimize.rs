use std::f64::consts::PI;

use rand::Rng;

use super::{chsh_from_correlators, chsh_value, eta_behavior, ChshSettings};
use crate::error::Result;
use crate::random::rng_from_seed;

/// Search strategy over the 12 rotation-vector parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizeMethod {
    /// Cyclic line scans: each coordinate is set to the best of `points`
    /// evenly spaced values in a window that halves after every sweep.
    Grid { points: usize },
    /// Compass search: try `±h` on each coordinate, halve `h` on stalls.
    CoordinateAscent,
}

/// Which rotations are free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizeScope {
    Independent,
    /// Alice and Bob share the same pair of rotations. Exploratory only.
    SharedRotations,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizeOptions {
    pub method: OptimizeMethod,
    pub scope: OptimizeScope,
    pub seed: u64,
    /// Random starting points tried in addition to the initial settings.
    pub restarts: usize,
    pub max_sweeps: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            method: OptimizeMethod::CoordinateAscent,
            scope: OptimizeScope::Independent,
            seed: crate::DEFAULT_SEED,
            restarts: 8,
            max_sweeps: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeOutcome {
    pub settings: ChshSettings,
    /// Max CHSH variant of the `η` behavior at `settings`.
    pub value: f64,
    pub evaluations: usize,
}

struct Objective<'a> {
    base: &'a ChshSettings,
    scope: OptimizeScope,
    evaluations: usize,
}

impl Objective<'_> {
    fn dim(&self) -> usize {
        match self.scope {
            OptimizeScope::Independent => 12,
            OptimizeScope::SharedRotations => 6,
        }
    }

    fn settings(&self, x: &[f64]) -> ChshSettings {
        let mut full = [0.0; 12];
        match self.scope {
            OptimizeScope::Independent => full.copy_from_slice(x),
            OptimizeScope::SharedRotations => {
                full[..6].copy_from_slice(x);
                full[6..].copy_from_slice(x);
            }
        }
        ChshSettings::from_rotation_parameters(&full, self.base.axis)
    }

    fn value(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let s = self.settings(x);
        let e = std::array::from_fn(|i| std::array::from_fn(|j| -s.alice_axis(i).dot(&s.bob_axis(j))));
        chsh_from_correlators(&e).max_variant
    }
}

/// Maximizes the `η` CHSH value over local rotations.
///
/// The initial settings and `restarts` seeded random points are each refined;
/// the best result wins. Improper initial rotations are replaced by their
/// proper part, which leaves the maximal CHSH variant unchanged.
pub fn optimize_chsh(initial: &ChshSettings, options: &OptimizeOptions) -> Result<OptimizeOutcome> {
    let mut objective = Objective {
        base: initial,
        scope: options.scope,
        evaluations: 0,
    };
    let dim = objective.dim();
    let mut rng = rng_from_seed(options.seed);

    let mut starts = vec![initial.rotation_parameters()[..dim].to_vec()];
    for _ in 0..options.restarts {
        starts.push((0..dim).map(|_| rng.random_range(-PI..PI)).collect());
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in starts {
        let (x, v) = match options.method {
            OptimizeMethod::CoordinateAscent => compass_search(&mut objective, start, options.max_sweeps),
            OptimizeMethod::Grid { points } => line_grid_search(&mut objective, start, points.max(3), options.max_sweeps),
        };
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((x, v));
        }
    }
    let (x, _) = best.expect("at least one start");
    let settings = objective.settings(&x);
    let value = chsh_value(&eta_behavior(&settings)?)?.max_variant;
    Ok(OptimizeOutcome {
        settings,
        value,
        evaluations: objective.evaluations,
    })
}

const MIN_STEP: f64 = 1e-9;

fn compass_search(f: &mut Objective<'_>, mut x: Vec<f64>, max_sweeps: usize) -> (Vec<f64>, f64) {
    let mut fx = f.value(&x);
    let mut step = 0.5;
    for _ in 0..max_sweeps {
        let mut improved = false;
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[k];
                x[k] = old + dir * step;
                let v = f.value(&x);
                if v > fx {
                    fx = v;
                    improved = true;
                    break;
                }
                x[k] = old;
            }
        }
        if !improved {
            step *= 0.5;
            if step < MIN_STEP {
                break;
            }
        }
    }
    (x, fx)
}

fn line_grid_search(f: &mut Objective<'_>, mut x: Vec<f64>, points: usize, max_sweeps: usize) -> (Vec<f64>, f64) {
    let mut fx = f.value(&x);
    let mut half_width = PI;
    for _ in 0..max_sweeps {
        for k in 0..x.len() {
            let center = x[k];
            let mut best = (center, fx);
            for p in 0..points {
                let t = -1.0 + 2.0 * p as f64 / (points - 1) as f64;
                x[k] = center + t * half_width;
                let v = f.value(&x);
                if v > best.1 {
                    best = (x[k], v);
                }
            }
            x[k] = best.0;
            fx = best.1;
        }
        half_width *= 0.5;
        if half_width < MIN_STEP {
            break;
        }
    }
    (x, fx)
}
