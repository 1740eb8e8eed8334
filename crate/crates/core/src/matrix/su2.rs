use num_complex::Complex;

use super::{Mat2C, TOL_GROUP};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Element of su(2) in the basis
///
/// ```text
/// J1 = [[0, i], [i, 0]],  J2 = [[0, −1], [1, 0]],  J3 = [[i, 0], [0, −i]].
/// ```
///
/// The basis is orthonormal for [`su2_metric`] and satisfies `[Ja, Jb] = 2 ε_abc Jc`, so the
/// adjoint action of `exp(tX)` rotates coefficient vectors about `X` by the angle `2|X|t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Su2Vector<T> {
    pub k1: T,
    pub k2: T,
    pub k3: T,
}

impl<T: Real> Su2Vector<T> {
    pub fn new(k1: T, k2: T, k3: T) -> Self {
        Self { k1, k2, k3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn j1() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn j2() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn j3() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_array(k: [T; 3]) -> Self {
        Self::new(k[0], k[1], k[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.k1, self.k2, self.k3]
    }

    pub fn to_matrix(self) -> Mat2C<T> {
        let i = |x: T| Complex::new(T::zero(), x);
        Mat2C::new(
            i(self.k3),
            Complex::new(-self.k2, self.k1),
            Complex::new(self.k2, self.k1),
            i(-self.k3),
        )
    }

    /// Coefficients of the traceless anti-hermitian part of `m`.
    pub fn from_matrix(m: &Mat2C<T>) -> Self {
        let two: T = lit(2.0);
        Self::new(
            (m.b.im + m.c.im) / two,
            (m.c.re - m.b.re) / two,
            (m.a.im - m.d.im) / two,
        )
    }

    pub fn dot(self, other: Self) -> T {
        self.k1 * other.k1 + self.k2 * other.k2 + self.k3 * other.k3
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.k2 * o.k3 - self.k3 * o.k2,
            self.k3 * o.k1 - self.k1 * o.k3,
            self.k1 * o.k2 - self.k2 * o.k1,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.k1 * s, self.k2 * s, self.k3 * s)
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self.scale(T::one() / n))
    }
}

impl<T: Real> std::ops::Add for Su2Vector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.k1 + o.k1, self.k2 + o.k2, self.k3 + o.k3)
    }
}

impl<T: Real> std::ops::Sub for Su2Vector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.k1 - o.k1, self.k2 - o.k2, self.k3 - o.k3)
    }
}

/// Invariant metric `−½ Re tr(XY)`, equal to the Euclidean dot product of coefficients.
pub fn su2_metric<T: Real>(x: Su2Vector<T>, y: Su2Vector<T>) -> T {
    x.dot(y)
}

/// Element of SU(2), stored as `[[u, −v̄], [v, ū]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Element<T> {
    m: Mat2C<T>,
}

impl<T: Real> SU2Element<T> {
    /// Validates `m†m = I` and `det m = 1` within the group tolerance.
    pub fn new(m: Mat2C<T>) -> Result<Self> {
        let tol = lit(TOL_GROUP);
        if m.unitarity_defect() > tol {
            return Err(Error::InvalidInput(format!(
                "matrix not unitary (defect {:e})",
                to_f64(m.unitarity_defect())
            )));
        }
        if !m.is_unimodular(tol) {
            return Err(Error::InvalidInput("determinant is not 1".into()));
        }
        Ok(Self { m })
    }

    /// Builds the element with first column `(u, v)`; the pair is normalized.
    pub fn from_column(u: Complex<T>, v: Complex<T>) -> Self {
        let n = (u.norm_sqr() + v.norm_sqr()).sqrt();
        let (u, v) = (u / n, v / n);
        Self { m: Mat2C::new(u, -v.conj(), v, u.conj()) }
    }

    /// Wraps a matrix already known to be special unitary.
    pub fn new_unchecked(m: Mat2C<T>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: Mat2C::identity() }
    }

    pub fn matrix(&self) -> &Mat2C<T> {
        &self.m
    }

    pub fn u(&self) -> Complex<T> {
        self.m.a
    }

    pub fn v(&self) -> Complex<T> {
        self.m.c
    }

    pub fn inverse(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    /// Adjoint action `g X g⁻¹` on su(2).
    pub fn adjoint_action(&self, x: Su2Vector<T>) -> Su2Vector<T> {
        Su2Vector::from_matrix(&(self.m * x.to_matrix() * self.m.adjoint()))
    }
}

/// Exponential of an su(2) element.
///
/// Since `X² = −|X|² I`, `exp X = cos|X| I + (sin|X| / |X|) X`.
pub fn su2_exp<T: Real>(x: Su2Vector<T>) -> SU2Element<T> {
    let theta = x.norm();
    let sinc = if theta < lit(1e-4) {
        let t2 = theta * theta;
        T::one() - t2 / lit(6.0) + t2 * t2 / lit(120.0)
    } else {
        theta.sin() / theta
    };
    let c = theta.cos();
    let xm = x.to_matrix();
    let re = |z: T| Complex::new(z, T::zero());
    SU2Element::new_unchecked(Mat2C::new(
        re(c) + xm.a * sinc,
        xm.b * sinc,
        xm.c * sinc,
        re(c) + xm.d * sinc,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type V = Su2Vector<f64>;

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(su2_exp(V::zero()).matrix(), &Mat2C::identity());
    }

    #[test]
    fn exp_quarter_turn_of_j3() {
        // Oracle: scaling-and-squaring exponential of the matrix.
        let x = V::j3().scale(PI / 2.0);
        let closed = su2_exp(x);
        let oracle = x.to_matrix().expm();
        assert!(closed.matrix().dist(&oracle) < 1e-14);
        let expected = Mat2C::diag(Complex::new(0.0, 1.0), Complex::new(0.0, -1.0));
        assert!(closed.matrix().dist(&expected) < 1e-15);
    }

    #[test]
    fn exp_at_norm_pi_is_minus_identity() {
        for dir in [V::new(1.0, 2.0, -0.5), V::new(0.0, 0.0, 1.0), V::new(-3.0, 1.0, 1.0)] {
            let x = dir.normalized().unwrap().scale(PI);
            let oracle = x.to_matrix().expm();
            assert!(oracle.dist(&(-Mat2C::identity())) < 1e-13);
            assert!(su2_exp(x).matrix().dist(&(-Mat2C::identity())) < 1e-15);
        }
    }

    #[test]
    fn exp_matches_oracle_on_spread_of_norms() {
        for k in 0..40 {
            let t = k as f64 * 0.25;
            let x = V::new(0.3 * t, -0.7 * t, 0.2 * t + 1e-9);
            assert!(su2_exp(x).matrix().dist(&x.to_matrix().expm()) < 1e-12);
        }
    }

    #[test]
    fn metric_orthonormal_basis() {
        assert_eq!(su2_metric(V::j3(), V::j3()), 1.0);
        assert_eq!(su2_metric(V::j1(), V::j2()), 0.0);
        let x = V::new(0.4, -1.2, 2.5);
        let y = V::new(-0.1, 0.9, 0.3);
        let trace = -0.5 * (x.to_matrix() * y.to_matrix()).trace().re;
        assert!((trace - su2_metric(x, y)).abs() < 1e-15);
        let trace2 = -0.5 * (x.to_matrix() * x.to_matrix()).trace().re;
        assert!((trace2 - su2_metric(x, x)).abs() < 1e-14);
    }

    #[test]
    fn commutators_close_on_the_basis() {
        let comm = |x: V, y: V| {
            let (a, b) = (x.to_matrix(), y.to_matrix());
            V::from_matrix(&(a * b - b * a))
        };
        assert_eq!(comm(V::j1(), V::j2()), V::j3().scale(2.0));
        assert_eq!(comm(V::j2(), V::j3()), V::j1().scale(2.0));
        assert_eq!(comm(V::j3(), V::j1()), V::j2().scale(2.0));
    }

    #[test]
    fn matrix_round_trip() {
        let x = V::new(0.4, -1.2, 2.5);
        assert_eq!(V::from_matrix(&x.to_matrix()), x);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Mat2C::diag(Complex::new(2.0, 0.0), Complex::new(0.5, 0.0));
        assert!(matches!(SU2Element::new(m), Err(Error::InvalidInput(_))));
    }
}
