use super::model::{BracketMatrix, PoissonModel};
use crate::scalar::Real;

/// Default central-difference step for Jacobi checks.
pub const JACOBI_FD_STEP: f64 = 1e-5;

/// Largest Jacobiator component `|Σₗ (πᵢₗ ∂ₗπⱼₖ + πⱼₗ ∂ₗπₖᵢ + πₖₗ ∂ₗπᵢⱼ)|`, with derivatives of
/// the bracket table taken by central differences of step `fd_step`.
pub fn jacobi_residual<T: Real>(model: &PoissonModel<T>, point: &[T], fd_step: T) -> T {
    let n = model.dimension;
    let pi = model.brackets(point);
    let two_h = fd_step + fd_step;
    let derivs: Vec<BracketMatrix<T>> = (0..n)
        .map(|l| {
            let mut xp = point.to_vec();
            let mut xm = point.to_vec();
            xp[l] = xp[l] + fd_step;
            xm[l] = xm[l] - fd_step;
            let (bp, bm) = (model.brackets(&xp), model.brackets(&xm));
            let mut d = BracketMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    d.set(i, j, (bp.get(i, j) - bm.get(i, j)) / two_h);
                }
            }
            d
        })
        .collect();
    let term = |i: usize, j: usize, k: usize| {
        (0..n).fold(T::zero(), |acc, l| acc + pi.get(i, l) * derivs[l].get(j, k))
    };
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = term(i, j, k) + term(j, k, i) + term(k, i, j);
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}
