use nalgebra::DMatrix;

use crate::error::{FemError, Result};

/// Sweep cap; exceeding it signals an ill-conditioned input rather than a
/// solver that just needs more time (quadratic convergence kicks in after a
/// handful of sweeps on anything reasonable).
const SWEEP_CAP: usize = 100;

/// Convergence threshold on the off-diagonal Frobenius norm, relative to the
/// full Frobenius norm so the test is invariant under matrix scaling.
const OFF_NORM_TOL: f64 = 1e-12;

/// Eigendecomposition of a real symmetric matrix: `a = V diag(values) V^T`
/// with orthonormal columns in `vectors`, unsorted.
#[derive(Debug, Clone)]
pub struct JacobiEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

fn off_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            acc += a[(p, q)] * a[(p, q)];
        }
    }
    (2.0 * acc).sqrt()
}

/// Cyclic Jacobi eigensolver with threshold sweeps.
///
/// Each sweep visits every upper-triangle pair but only rotates entries
/// above a threshold proportional to the current off-diagonal norm, which
/// skips work on already-negligible entries while guaranteeing progress.
/// The input must be symmetric; callers construct it via
/// [`crate::HermitianOperator`] or the reduction in [`crate::reduce_generalized`],
/// both of which enforce that.
pub fn jacobi_eigen(matrix: &DMatrix<f64>) -> Result<JacobiEigen> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(FemError::NotSquare {
            which: "eigensolver input",
            rows: n,
            cols: matrix.ncols(),
        });
    }
    let mut a = matrix.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let frob = a.norm();
    if n < 2 || frob == 0.0 {
        return Ok(collect(a, v));
    }
    let tol = OFF_NORM_TOL * frob;

    for _ in 0..SWEEP_CAP {
        let off = off_norm(&a);
        if off <= tol {
            return Ok(collect(a, v));
        }
        // At least one entry exceeds off / (n(n-1)) in magnitude, so every
        // sweep performs at least one rotation.
        let threshold = off / (n * (n - 1)) as f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                if a[(p, q)].abs() > threshold {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let off = off_norm(&a);
    if off <= tol {
        Ok(collect(a, v))
    } else {
        Err(FemError::JacobiDidNotConverge { off_norm: off, sweeps: SWEEP_CAP })
    }
}

fn collect(a: DMatrix<f64>, v: DMatrix<f64>) -> JacobiEigen {
    JacobiEigen {
        values: (0..a.nrows()).map(|i| a[(i, i)]).collect(),
        vectors: v,
    }
}

/// One Givens rotation in the (p, q) plane, chosen to annihilate `a[p][q]`:
/// with `tau = (a_qq - a_pp) / (2 a_pq)`, the smaller-magnitude root of
/// `t^2 + 2 tau t - 1 = 0` gives the tangent, which keeps the rotation angle
/// below pi/4 and the iteration stable.
fn rotate(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.nrows();
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
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
