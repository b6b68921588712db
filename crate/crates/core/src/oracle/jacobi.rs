use nalgebra::{Complex, DMatrix};

/// Convergence threshold on the off-diagonal norm, relative to `‖A‖_F`.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 30;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: DMatrix<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a[(p, q)] * a[(p, q)];
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Each sweep annihilates every off-diagonal pair `(p, q)` once with a plane
/// rotation; iteration stops when the off-diagonal Frobenius norm falls below
/// `JACOBI_TOL · ‖A‖_F` or after `JACOBI_MAX_SWEEPS` sweeps.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> SymmetricEigen {
    assert!(a.is_square(), "Jacobi needs a square matrix");
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm().max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    let mut converged = off_diagonal_norm(&a) <= JACOBI_TOL * scale;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← Jᵀ A J with J the (p, q) rotation.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        converged = off_diagonal_norm(&a) <= JACOBI_TOL * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    SymmetricEigen {
        eigenvalues,
        eigenvectors,
        sweeps,
        converged,
    }
}

/// Eigenvalues (ascending) of a Hermitian matrix `H = A + iB`.
///
/// Diagonalizes the real symmetric embedding `[[A, −B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex<f64>>) -> Vec<f64> {
    let n = h.nrows();
    let embed = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        // Symmetrize so tiny Hermiticity noise cannot break the embedding.
        let zt = h[(c % n, r % n)].conj();
        let (re, im) = (0.5 * (z.re + zt.re), 0.5 * (z.im + zt.im));
        match (r < n, c < n) {
            (true, true) | (false, false) => re,
            (true, false) => -im,
            (false, true) => im,
        }
    });
    symmetric_eigen(&embed).eigenvalues.into_iter().step_by(2).collect()
}
