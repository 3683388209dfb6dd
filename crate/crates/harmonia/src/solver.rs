//! Symmetric positive definite solvers used for the Dirichlet systems:
//! a dense Cholesky factorization for small interiors and conjugate
//! gradients for large ones. Both are generic over the scalar.

use crate::error::{Error, Result};
use crate::num::Real;

/// Interior size up to which the dense factorization is used. Above this the
/// kernel assembly falls back to CG against the sparse operator.
pub const DENSE_LIMIT: usize = 2000;

/// Relative residual target for the CG fallback.
pub const CG_TOL: f64 = 1e-12;

/// Dense Cholesky factorization A = L L^T of an SPD matrix, row-major.
#[derive(Debug, Clone)]
pub struct DenseCholesky<T> {
    n: usize,
    l: Vec<T>,
}

impl<T: Real> DenseCholesky<T> {
    /// Factor a dense symmetric matrix. Fails (as an internal inconsistency:
    /// the Dirichlet matrices are provably SPD once every component touches
    /// the boundary) when a pivot is not strictly positive.
    pub fn factor(a: &[T], n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n, "matrix shape mismatch");
        let mut l = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if !(s > T::zero()) {
                        return Err(Error::Inconsistency(format!(
                            "non-positive pivot {s} at row {i}; matrix is not SPD"
                        )));
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(Self { n, l })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut y = b.to_vec();
        // forward: L y = b
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s = s - self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s = s - self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }
}

/// Conjugate gradients for an SPD operator given as a matvec closure.
/// Stops at relative residual `tol` or errors at `max_iter`.
pub fn conjugate_gradient<T: Real>(
    apply: impl Fn(&[T], &mut [T]),
    b: &[T],
    tol: T,
    max_iter: usize,
) -> Result<Vec<T>> {
    let n = b.len();
    let bnorm = b.iter().map(|&v| v * v).sum::<T>().sqrt();
    if bnorm == T::zero() {
        return Ok(vec![T::zero(); n]);
    }
    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![T::zero(); n];
    let mut rs = r.iter().map(|&v| v * v).sum::<T>();
    for _ in 0..max_iter {
        if rs.sqrt() <= tol * bnorm {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let pap = p.iter().zip(&ap).map(|(&pi, &api)| pi * api).sum::<T>();
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new = r.iter().map(|&v| v * v).sum::<T>();
        let beta = rs_new / rs;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rs = rs_new;
    }
    if rs.sqrt() <= tol * bnorm {
        Ok(x)
    } else {
        Err(Error::NonConvergence {
            iterations: max_iter,
            delta: (rs.sqrt() / bnorm).to_f64_lossy(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_tridiagonal() {
        // tridiag(-1; 2; -1), rhs [0,0,1] -> x = [1/4, 1/2, 3/4]
        let a = vec![2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        let f = DenseCholesky::<f64>::factor(&a, 3).unwrap();
        let x = f.solve(&[0.0, 0.0, 1.0]);
        for (got, want) in x.iter().zip([0.25, 0.5, 0.75]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(DenseCholesky::factor(&a, 2).is_err());
    }

    #[test]
    fn cg_matches_cholesky() {
        let a = vec![4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let b = [1.0, -2.0, 0.5];
        let dense = DenseCholesky::<f64>::factor(&a, 3).unwrap().solve(&b);
        let cg = conjugate_gradient(
            |p, out| {
                for i in 0..3 {
                    out[i] = (0..3).map(|j| a[i * 3 + j] * p[j]).sum();
                }
            },
            &b,
            1e-13,
            100,
        )
        .unwrap();
        for (x, y) in dense.iter().zip(&cg) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
