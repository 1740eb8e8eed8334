use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{lit, Real};

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Mat2C<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self::new(o, z, z, o)
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(z, z, z, z)
    }

    pub fn diag(a: Complex<T>, d: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(a, z, z, d)
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex<T> {
        self.a + self.d
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    /// Inverse assuming unit determinant.
    pub fn inverse_unimodular(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == T::zero() {
            return None;
        }
        let inv = det.inv();
        Some(Self::new(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.a.norm().max(self.b.norm()).max(self.c.norm()).max(self.d.norm())
    }

    /// Sum of squared entry moduli, `tr(M†M)`.
    pub fn frobenius_sqr(&self) -> T {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    pub fn dist(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    /// Largest entry of `M†M − I`.
    pub fn unitarity_defect(&self) -> T {
        (self.adjoint() * *self).dist(&Self::identity())
    }

    pub fn is_unimodular(&self, tol: T) -> bool {
        (self.det() - Complex::new(T::one(), T::zero())).norm() <= tol
    }

    pub fn is_special_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol && self.is_unimodular(tol)
    }

    /// Exponential by scaling and squaring with a Taylor kernel. Works for any matrix.
    pub fn expm(&self) -> Self {
        let norm = self.max_abs() * lit(2.0);
        let mut squarings = 0;
        let mut scaled = *self;
        let half = Complex::new(lit::<T>(0.5), T::zero());
        let mut n = norm;
        while n > lit(0.25) {
            scaled = scaled.scale(half);
            n = n * lit(0.5);
            squarings += 1;
        }
        let mut term = Self::identity();
        let mut sum = Self::identity();
        for k in 1..=20 {
            term = (term * scaled).scale(Complex::new(T::one() / lit(k as f64), T::zero()));
            sum = sum + term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl<T: Real> Mul for Mat2C<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

impl<T: Real> Add for Mat2C<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl<T: Real> Sub for Mat2C<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl<T: Real> Neg for Mat2C<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}
