//! Phase-one simplex for small feasibility problems `A x = b, x ≥ 0`.

const PIVOT_EPS: f64 = 1e-12;

/// Finds a point with `A x = b`, `x ≥ 0`, or `None` when the artificial
/// objective cannot be driven below `tol`.
///
/// `a` is row-major with one row per equality. Redundant rows are allowed.
/// Uses Bland's rule, so it terminates on degenerate problems.
pub fn find_feasible_point(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = a.len();
    assert_eq!(m, b.len(), "one right-hand side per row");
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;

    // Rows with b ≥ 0, then the artificial identity block and the rhs.
    let mut tab: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, &rhs))| {
            let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
            let mut r = vec![0.0; width];
            for (k, x) in row.iter().enumerate() {
                r[k] = sign * x;
            }
            r[n + i] = 1.0;
            r[width - 1] = sign * rhs;
            r
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of minimizing the artificial sum.
    let mut cost = vec![0.0; width];
    for row in &tab {
        for k in 0..n {
            cost[k] -= row[k];
        }
        cost[width - 1] -= row[width - 1];
    }

    let max_iter = 50 * (n + m) + 100;
    for _ in 0..max_iter {
        let Some(enter) = (0..n + m).find(|&k| cost[k] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            let coef = tab[i][enter];
            if coef > PIVOT_EPS {
                let ratio = tab[i][width - 1] / coef;
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let best = tab[l][width - 1] / tab[l][enter];
                        if ratio < best - PIVOT_EPS || (ratio <= best + PIVOT_EPS && basis[i] < basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        // Unbounded direction cannot occur for a bounded-below phase-one objective.
        let leave = leave?;
        pivot(&mut tab, &mut cost, leave, enter);
        basis[leave] = enter;
    }

    let infeasibility = -cost[width - 1];
    if infeasibility > tol {
        return None;
    }
    let mut x = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tab[i][width - 1];
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<f64>], cost: &mut [f64], row: usize, col: usize) {
    let p = tab[row][col];
    for x in tab[row].iter_mut() {
        *x /= p;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row {
            let f = r[col];
            if f != 0.0 {
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    let f = cost[col];
    for (x, y) in cost.iter_mut().zip(&pivot_row) {
        *x -= f * y;
    }
}
