use num_complex::Complex;

use super::{Mat2C, SU2Element, TOL_GROUP};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Entries with modulus below this are treated as zero when splitting on the E(2) triple.
pub const DECOMPOSABLE_TOL: f64 = 1e-10;
/// Entries with modulus below this are flagged as near the edge of the decomposable set.
pub const NEAR_SINGULAR_TOL: f64 = 1e-6;

/// Element `[[ρ, n], [0, ρ⁻¹]]` of the dual group (upper triangular, positive diagonal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorelElement<T> {
    pub rho: T,
    pub n: Complex<T>,
}

impl<T: Real> BorelElement<T> {
    pub fn new(rho: T, n: Complex<T>) -> Result<Self> {
        if !rho.is_finite() || rho <= T::zero() {
            return Err(Error::InvalidInput(format!("rho must be positive, got {}", rho)));
        }
        Ok(Self { rho, n })
    }

    pub fn identity() -> Self {
        Self { rho: T::one(), n: Complex::new(T::zero(), T::zero()) }
    }

    pub fn matrix(&self) -> Mat2C<T> {
        let re = |x: T| Complex::new(x, T::zero());
        Mat2C::new(re(self.rho), self.n, re(T::zero()), re(self.rho.recip()))
    }

    pub fn inverse(&self) -> Self {
        Self { rho: self.rho.recip(), n: -self.n }
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self { rho: self.rho * o.rho, n: self.n * o.rho.recip() + o.n * self.rho }
    }
}

/// Element `[[α, 0], [γ, ᾱ]]` with `|α| = 1`: the double cover of E(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E2Element<T> {
    pub alpha: Complex<T>,
    pub gamma: Complex<T>,
}

impl<T: Real> E2Element<T> {
    pub fn new(alpha: Complex<T>, gamma: Complex<T>) -> Result<Self> {
        if (alpha.norm() - T::one()).abs() > lit(TOL_GROUP) {
            return Err(Error::InvalidInput("|alpha| must be 1".into()));
        }
        Ok(Self { alpha, gamma })
    }

    pub fn identity() -> Self {
        Self {
            alpha: Complex::new(T::one(), T::zero()),
            gamma: Complex::new(T::zero(), T::zero()),
        }
    }

    /// The coset representative `[[1, 0], [x, 1]]` of a plane point `x`.
    pub fn from_position(x: Complex<T>) -> Self {
        Self { alpha: Complex::new(T::one(), T::zero()), gamma: x }
    }

    pub fn matrix(&self) -> Mat2C<T> {
        Mat2C::new(self.alpha, Complex::new(T::zero(), T::zero()), self.gamma, self.alpha.conj())
    }

    /// Image in the plane `G/H`: `x = ᾱγ`.
    pub fn position(&self) -> Complex<T> {
        self.alpha.conj() * self.gamma
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self {
            alpha: self.alpha * o.alpha,
            gamma: self.gamma * o.alpha + self.alpha.conj() * o.gamma,
        }
    }
}

/// Result of a two-factor split `M = left · right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split<L, R> {
    pub left: L,
    pub right: R,
    /// The pivot entry was within [`NEAR_SINGULAR_TOL`] of zero.
    pub near_singular: bool,
}

impl<L, R> Split<L, R> {
    pub fn into_parts(self) -> (L, R) {
        (self.left, self.right)
    }
}

fn check_unimodular<T: Real>(m: &Mat2C<T>) -> Result<()> {
    let scale = T::one().max(m.frobenius_sqr());
    if (m.det() - Complex::new(T::one(), T::zero())).norm() > lit::<T>(TOL_GROUP) * scale {
        return Err(Error::InvalidInput(format!(
            "determinant {} is not 1",
            to_f64(m.det().norm())
        )));
    }
    Ok(())
}

fn pivot<T: Real>(z: Complex<T>, entry: &'static str) -> Result<bool> {
    let mag = z.norm();
    if mag < lit(DECOMPOSABLE_TOL) {
        return Err(Error::OutsideDecomposableSet { entry, magnitude: to_f64(mag) });
    }
    Ok(mag < lit(NEAR_SINGULAR_TOL))
}

/// `M = k·b` with `k ∈ SU(2)` and `b` in the dual group. Defined on all of SL(2,ℂ).
pub fn factor_su2_borel<T: Real>(m: &Mat2C<T>) -> Result<(SU2Element<T>, BorelElement<T>)> {
    check_unimodular(m)?;
    // Normalize the first column; b = k†M.
    let rho = m.a.norm().hypot(m.c.norm());
    let k = SU2Element::from_column(m.a / rho, m.c / rho);
    let b = k.matrix().adjoint() * *m;
    Ok((k, BorelElement { rho, n: b.b }))
}

/// `M = b·k` with `b` in the dual group and `k ∈ SU(2)`. Defined on all of SL(2,ℂ).
pub fn factor_borel_su2<T: Real>(m: &Mat2C<T>) -> Result<(BorelElement<T>, SU2Element<T>)> {
    check_unimodular(m)?;
    // The second row of M is ρ⁻¹ times the second row (v, ū) of k.
    let r = m.c.norm().hypot(m.d.norm());
    let k = SU2Element::from_column(m.d.conj() / r, m.c / r);
    let b = *m * k.matrix().adjoint();
    Ok((BorelElement { rho: r.recip(), n: b.b }, k))
}

/// `M = l·u` with `l ∈ E(2)` (lower triangular) and `u` in the dual group.
///
/// Requires `M.a ≠ 0`; then `ρ = |M.a|` and `α = M.a / ρ`.
pub fn factor_e2_borel<T: Real>(m: &Mat2C<T>) -> Result<Split<E2Element<T>, BorelElement<T>>> {
    check_unimodular(m)?;
    let near_singular = pivot(m.a, "a")?;
    let rho = m.a.norm();
    let alpha = m.a / rho;
    Ok(Split {
        left: E2Element { alpha, gamma: m.c / rho },
        right: BorelElement { rho, n: m.b / alpha },
        near_singular,
    })
}

/// `M = u·l` with `u` in the dual group and `l ∈ E(2)`.
///
/// Requires `M.d ≠ 0`; then `ᾱ/ρ = M.d` fixes both factors.
pub fn factor_borel_e2<T: Real>(m: &Mat2C<T>) -> Result<Split<BorelElement<T>, E2Element<T>>> {
    check_unimodular(m)?;
    let near_singular = pivot(m.d, "d")?;
    let r = m.d.norm();
    let alpha_bar = m.d / r;
    let rho = r.recip();
    Ok(Split {
        left: BorelElement { rho, n: m.b / alpha_bar },
        right: E2Element { alpha: alpha_bar.conj(), gamma: m.c * rho },
        near_singular,
    })
}

/// `(1/ε) Im tr(XY)`, the invariant pairing on sl(2,ℂ) for which su(2) (or the E(2) algebra)
/// and the dual algebra are isotropic.
pub fn manin_pairing<T: Real>(x: &Mat2C<T>, y: &Mat2C<T>, epsilon: T) -> Result<T> {
    if epsilon == T::zero() {
        return Err(Error::InvalidParameter("epsilon must be nonzero".into()));
    }
    Ok((*x * *y).trace().im / epsilon)
}

/// Which Manin triple inside SL(2,ℂ) is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triple {
    Su2,
    E2,
}

/// Dressing on the SU(2) triple: `g·b = ᵍb·g′`. Always defined.
pub fn dress_su2<T: Real>(
    g: &SU2Element<T>,
    b: &BorelElement<T>,
) -> (BorelElement<T>, SU2Element<T>) {
    let prod = *g.matrix() * b.matrix();
    factor_borel_su2(&prod).expect("product of SU(2) and dual elements is unimodular")
}

/// Dressing on the E(2) triple: `g·b = ᵍb·g′`, when the product is decomposable.
pub fn dress_e2<T: Real>(
    g: &E2Element<T>,
    b: &BorelElement<T>,
) -> Result<Split<BorelElement<T>, E2Element<T>>> {
    factor_borel_e2(&(g.matrix() * b.matrix()))
}

/// Dressing action of a group element (given as a matrix) on a dual element.
///
/// Returns `(ᵍg*, g′)` with `ᵍg*·g′ = g·g*`.
pub fn dressing<T: Real>(
    g: &Mat2C<T>,
    gstar: &BorelElement<T>,
    triple: Triple,
) -> Result<(BorelElement<T>, Mat2C<T>)> {
    match triple {
        Triple::Su2 => {
            let g = SU2Element::new(*g)?;
            let (b, k) = dress_su2(&g, gstar);
            Ok((b, *k.matrix()))
        }
        Triple::E2 => {
            if g.b.norm() > lit(TOL_GROUP) {
                return Err(Error::InvalidInput("E(2) element must be lower triangular".into()));
            }
            let g = E2Element::new(g.a, g.c)?;
            let split = dress_e2(&g, gstar)?;
            Ok((split.left, split.right.matrix()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Mat2C<f64>;
    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn sample() -> M {
        // det = 1 by construction of d.
        let (a, b, cc) = (c(0.7, -1.1), c(0.3, 2.0), c(-1.4, 0.2));
        M::new(a, b, cc, (c(1.0, 0.0) + b * cc) / a)
    }

    #[test]
    fn identity_splits_trivially() {
        let id = M::identity();
        let (k, b) = factor_su2_borel(&id).unwrap();
        assert_eq!(*k.matrix(), id);
        assert_eq!(b, BorelElement::identity());
        let (b, k) = factor_borel_su2(&id).unwrap();
        assert_eq!(*k.matrix(), id);
        assert_eq!(b, BorelElement::identity());
        let s = factor_e2_borel(&id).unwrap();
        assert_eq!((s.left, s.right), (E2Element::identity(), BorelElement::identity()));
        let s = factor_borel_e2(&id).unwrap();
        assert_eq!((s.left, s.right), (BorelElement::identity(), E2Element::identity()));
    }

    #[test]
    fn unitary_input_has_trivial_dual_part() {
        let g = super::super::su2_exp(super::super::Su2Vector::<f64>::new(0.3, -0.8, 1.9));
        let (k, b) = factor_su2_borel(g.matrix()).unwrap();
        assert!(k.matrix().dist(g.matrix()) < 1e-15);
        assert!((b.rho - 1.0).abs() < 1e-15 && b.n.norm() < 1e-15);
        let bb = BorelElement::new(1.7, c(0.2, -0.4)).unwrap();
        let (b2, k2) = factor_borel_su2(&bb.matrix()).unwrap();
        assert!(k2.matrix().dist(&M::identity()) < 1e-15);
        assert!((b2.rho - bb.rho).abs() < 1e-15 && (b2.n - bb.n).norm() < 1e-15);
    }

    #[test]
    fn splits_recompose() {
        let m = sample();
        let (k, b) = factor_su2_borel(&m).unwrap();
        assert!((*k.matrix() * b.matrix()).dist(&m) < 1e-14);
        assert!(k.matrix().unitarity_defect() < 1e-15);
        let (b, k) = factor_borel_su2(&m).unwrap();
        assert!((b.matrix() * *k.matrix()).dist(&m) < 1e-14);
        let s = factor_e2_borel(&m).unwrap();
        assert!((s.left.matrix() * s.right.matrix()).dist(&m) < 1e-14);
        let s = factor_borel_e2(&m).unwrap();
        assert!((s.left.matrix() * s.right.matrix()).dist(&m) < 1e-14);
    }

    #[test]
    fn e2_split_fails_on_zero_pivot() {
        let w = M::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            factor_e2_borel(&w),
            Err(Error::OutsideDecomposableSet { entry: "a", .. })
        ));
        assert!(matches!(
            factor_borel_e2(&w),
            Err(Error::OutsideDecomposableSet { entry: "d", .. })
        ));
    }

    #[test]
    fn near_singular_pivot_is_flagged() {
        let m = M::new(c(1e-8, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
        let s = factor_e2_borel(&m).unwrap();
        assert!(s.near_singular);
        assert!(!factor_e2_borel(&sample()).unwrap().near_singular);
    }

    #[test]
    fn non_unimodular_rejected() {
        let m = M::diag(c(2.0, 0.0), c(2.0, 0.0));
        assert!(matches!(factor_su2_borel(&m), Err(Error::InvalidInput(_))));
        assert!(matches!(factor_e2_borel(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn pairing_values() {
        let j3 = super::super::Su2Vector::<f64>::j3().to_matrix();
        assert_eq!(manin_pairing(&j3, &j3, 1.0).unwrap(), 0.0);
        let h = M::diag(c(1.0, 0.0), c(-1.0, 0.0));
        assert_eq!(manin_pairing(&j3, &h, 1.0).unwrap(), 2.0);
        assert!(matches!(manin_pairing(&j3, &h, 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn dressing_by_units() {
        let b = BorelElement::new(0.6, c(1.0, -2.0)).unwrap();
        let (bd, g) = dressing(&M::identity(), &b, Triple::Su2).unwrap();
        assert!((bd.rho - b.rho).abs() < 1e-15 && (bd.n - b.n).norm() < 1e-15);
        assert!(g.dist(&M::identity()) < 1e-15);

        let g = super::super::su2_exp(super::super::Su2Vector::<f64>::new(1.0, 0.5, -0.2));
        let (bd, g2) = dressing(g.matrix(), &BorelElement::identity(), Triple::Su2).unwrap();
        assert!((bd.rho - 1.0).abs() < 1e-15 && bd.n.norm() < 1e-15);
        assert!(g2.dist(g.matrix()) < 1e-15);

        let l = E2Element::new(C::from_polar(1.0, 0.3), c(0.5, 0.5)).unwrap();
        let (bd, g2) = dressing(&l.matrix(), &BorelElement::identity(), Triple::E2).unwrap();
        assert!((bd.rho - 1.0).abs() < 1e-15 && bd.n.norm() < 1e-15);
        assert!(g2.dist(&l.matrix()) < 1e-15);
    }

    #[test]
    fn e2_position_of_coset() {
        let l = E2Element::new(C::from_polar(1.0, 0.8), c(0.3, -0.1)).unwrap();
        let h = E2Element::new(C::from_polar(1.0, -1.3), c(0.0, 0.0)).unwrap();
        // Right multiplication by the diagonal subgroup H fixes x = ᾱγ.
        assert!((l.compose(&h).position() - l.position()).norm() < 1e-15);
        assert!((l.compose(&h).matrix().dist(&(l.matrix() * h.matrix()))) < 1e-15);
    }
}
