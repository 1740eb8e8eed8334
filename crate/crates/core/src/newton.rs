//! Damped Newton iteration with a finite-difference Jacobian, for small square systems.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

pub const MAX_ITERATIONS: usize = 100;

fn max_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting. `a` is row-major `n×n`.
pub fn solve_linear<T: Real>(mut a: Vec<T>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv * n + col] == T::zero() || !a[piv * n + col].is_finite() {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            for k in col..n {
                a[row * n + k] = a[row * n + k] - f * a[col * n + k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(b[row], |s, k| s - a[row * n + k] * x[k]);
        x[row] = s / a[row * n + row];
    }
    Some(x)
}

/// Finds a root of `f` starting from `seed`. Converged when `max|f(x)| ≤ tol`.
pub fn solve<T, F>(f: F, seed: Vec<T>, tol: T, max_iter: usize) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<Vec<T>>,
{
    let n = seed.len();
    let mut x = seed;
    let mut fx = f(&x)?;
    let mut res = max_norm(&fx);
    let h_rel = T::epsilon().sqrt();
    for _ in 0..max_iter {
        if res <= tol {
            return Ok(x);
        }
        let mut jac = vec![T::zero(); n * n];
        for j in 0..n {
            let h = h_rel * T::one().max(x[j].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] = xp[j] + h;
            xm[j] = xm[j] - h;
            let (fp, fm) = (f(&xp)?, f(&xm)?);
            for i in 0..n {
                jac[i * n + j] = (fp[i] - fm[i]) / (h + h);
            }
        }
        let rhs: Vec<T> = fx.iter().map(|v| -*v).collect();
        let step = solve_linear(jac, rhs).ok_or(Error::NoConvergence {
            iterations: 0,
            residual: to_f64(res),
        })?;
        // Backtrack until the residual decreases.
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<T> = x.iter().zip(&step).map(|(a, s)| *a + lambda * *s).collect();
            if let Ok(ft) = f(&trial) {
                let r = max_norm(&ft);
                if r < res || r <= tol {
                    x = trial;
                    fx = ft;
                    res = r;
                    accepted = true;
                    break;
                }
            }
            lambda = lambda * lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    if res <= tol {
        Ok(x)
    } else {
        Err(Error::NoConvergence { iterations: max_iter, residual: to_f64(res) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_solve() {
        let a: Vec<f64> = vec![0.0, 2.0, 1.0, 1.0];
        let x = solve_linear(a, vec![4.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        assert!(solve_linear(vec![0.0, 0.0, 0.0, 0.0], vec![1.0, 1.0]).is_none());
    }

    #[test]
    fn finds_root_of_nonlinear_system() {
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + x[1] - 3.0, x[0] - x[1].exp() + 1.0]);
        let root = solve(f, vec![1.0, 1.0], 1e-13, 100).unwrap();
        let r = f(&root).unwrap();
        assert!(r.iter().all(|v| v.abs() <= 1e-13));
    }

    #[test]
    fn reports_non_convergence() {
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + 1.0]);
        assert!(matches!(solve(f, vec![0.5], 1e-12, 100), Err(Error::NoConvergence { .. })));
    }
}
