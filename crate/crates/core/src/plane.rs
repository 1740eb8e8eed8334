//! The Poisson plane: the homogeneous space `E(2)/H ≅ ℂ` of the Poisson group E(2).
//!
//! A phase point is `(x, η)` with `x` a position in the plane and `η` a momentum in the
//! annihilator subgroup of the dual group. Everything is defined off the set where
//! `1 − iεx̄η` vanishes.
//!
//! Real coordinates are `x = x¹ + ix²`, `η = η¹ + iη²`, ordered `(x¹, x², η¹, η²)`. In the
//! commuting picture `(q, p)` with `q = q¹ + iq²`, `p = p₁ + ip₂`, the only nonzero complex
//! bracket `{p, q̄} = 2` is the real bracket `{p_k, q^k} = 1`.

use num_complex::Complex;

use crate::engine::{BracketMatrix, Monitor, PoissonModel};
use crate::error::{Error, Result};
use crate::matrix::{factor_borel_e2, BorelElement, E2Element, Mat2C, DECOMPOSABLE_TOL};
use crate::newton;
use crate::scalar::{expm1c, lit, ln1pc, real, sinc, sinc_prime, to_f64, Real};

type C<T> = Complex<T>;

fn cx<T: Real>(re: T, im: T) -> C<T> {
    C::new(re, im)
}

fn i_unit<T: Real>() -> C<T> {
    C::new(T::zero(), T::one())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneParams<T> {
    pub epsilon: T,
}

impl<T: Real> PlaneParams<T> {
    pub fn new(epsilon: T) -> Self {
        Self { epsilon }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanePhasePoint<T> {
    pub x: C<T>,
    pub eta: C<T>,
}

impl<T: Real> PlanePhasePoint<T> {
    pub fn new(x: C<T>, eta: C<T>) -> Self {
        Self { x, eta }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.x.re, self.x.im, self.eta.re, self.eta.im]
    }

    pub fn from_slice(s: &[T]) -> Self {
        Self::new(cx(s[0], s[1]), cx(s[2], s[3]))
    }

    /// `1 − iεx̄η`.
    pub fn denominator(&self, epsilon: T) -> C<T> {
        C::new(T::one(), T::zero()) - i_unit::<T>() * self.x.conj() * self.eta * epsilon
    }

    pub fn is_admissible(&self, epsilon: T) -> bool {
        self.denominator(epsilon).norm() >= lit(DECOMPOSABLE_TOL)
    }
}

/// Dual group element in momentum parameters: `ρ = e^{εs}`, `n = iεP̄`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualElement<T> {
    pub p: C<T>,
    pub s: T,
}

impl<T: Real> DualElement<T> {
    pub fn to_borel(&self, epsilon: T) -> BorelElement<T> {
        BorelElement { rho: (epsilon * self.s).exp(), n: i_unit::<T>() * self.p.conj() * epsilon }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlaneCotangentPoint<T> {
    pub q: C<T>,
    pub p: C<T>,
}

impl<T: Real> PlaneCotangentPoint<T> {
    pub fn new(q: C<T>, p: C<T>) -> Self {
        Self { q, p }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.q.re, self.q.im, self.p.re, self.p.im]
    }

    pub fn from_slice(s: &[T]) -> Self {
        Self::new(cx(s[0], s[1]), cx(s[2], s[3]))
    }

    /// `q̄p`.
    pub fn action(&self) -> C<T> {
        self.q.conj() * self.p
    }
}

/// Shape of a free trajectory in the `(x, η)` picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleMotion<T> {
    Circle { center: C<T>, radius: T, period: T },
    /// Zero momentum: the particle rests at `x`.
    Point { x: C<T> },
}

fn admissible_denominator<T: Real>(p: &PlanePhasePoint<T>, epsilon: T) -> Result<C<T>> {
    let d = p.denominator(epsilon);
    if d.norm() < lit(DECOMPOSABLE_TOL) {
        return Err(Error::OutsidePhaseSpace(format!(
            "|1 − iεx̄η| = {:e}",
            to_f64(d.norm())
        )));
    }
    Ok(d)
}

/// Coefficient `c` in `{x̄, x} = i·c`, that is `2ε|x|²`. Equivalently `{x¹, x²} = ε|x|²`.
pub fn plane_config_bracket<T: Real>(x: C<T>, params: &PlaneParams<T>) -> T {
    lit::<T>(2.0) * params.epsilon * x.norm_sqr()
}

/// Real bracket table over `(x¹, x², η¹, η²)`.
///
/// Built from `{x̄, x} = 2iε|x|²`, `{η̄, η} = −2iε|η|²`, `{η, x} = −2iεηx` and
/// `{η, x̄} = 2(1 − iεx̄η)`.
pub fn plane_phase_brackets<T: Real>(p: &PlanePhasePoint<T>, params: &PlaneParams<T>) -> BracketMatrix<T> {
    let e = params.epsilon;
    let two: T = lit(2.0);
    let i = i_unit::<T>();
    let a = -i * p.eta * p.x * (two * e);
    let b = (C::new(T::one(), T::zero()) - i * p.x.conj() * p.eta * e) * two;
    let mut m = BracketMatrix::zeros(4);
    m.set_pair(0, 1, e * p.x.norm_sqr());
    m.set_pair(2, 3, -e * p.eta.norm_sqr());
    m.set_pair(2, 0, (a + b).re / two);
    m.set_pair(3, 1, (b - a).re / two);
    m.set_pair(2, 1, (a - b).im / two);
    m.set_pair(3, 0, (a + b).im / two);
    m
}

/// Left and right groupoid projections: `x` and `x/(1 − iεx̄η)`.
pub fn plane_projections<T: Real>(p: &PlanePhasePoint<T>, params: &PlaneParams<T>) -> Result<(C<T>, C<T>)> {
    let d = admissible_denominator(p, params.epsilon)?;
    Ok((p.x, p.x / d))
}

/// Right projection computed by refactoring `[[1,0],[x,1]]·[[1,iεη̄],[0,1]]` as
/// (dual)·(E(2)) and reading off the E(2) factor's position.
pub fn plane_right_projection_via_factorization<T: Real>(
    p: &PlanePhasePoint<T>,
    params: &PlaneParams<T>,
) -> Result<C<T>> {
    let upper = BorelElement { rho: T::one(), n: i_unit::<T>() * p.eta.conj() * params.epsilon };
    let prod: Mat2C<T> = E2Element::from_position(p.x).matrix() * upper.matrix();
    Ok(factor_borel_e2(&prod)?.right.position())
}

/// Moment map `J(x, η) = (η·|D|/D, −(1/ε) log|D|)` with `D = 1 − iεx̄η`.
pub fn plane_moment<T: Real>(p: &PlanePhasePoint<T>, params: &PlaneParams<T>) -> Result<DualElement<T>> {
    let e = params.epsilon;
    let d = admissible_denominator(p, e)?;
    let w = p.x.conj() * p.eta;
    // log|D| = ½ ln(1 + u) with u = |D|² − 1 = ε(2 Im w + ε|w|²).
    let slope = lit::<T>(2.0) * w.im + e * w.norm_sqr();
    let s = -slope * real::ln1pc(e * slope) / lit(2.0);
    Ok(DualElement { p: p.eta * d.norm() / d, s })
}

/// Free Hamiltonian `½|η|²`.
pub fn plane_hamiltonian<T: Real>(eta: C<T>) -> T {
    eta.norm_sqr() / lit(2.0)
}

/// `(ẋ, η̇) = (η, −iε|η|²η)`.
pub fn plane_eom_rhs<T: Real>(p: &PlanePhasePoint<T>, params: &PlaneParams<T>) -> (C<T>, C<T>) {
    (p.eta, -i_unit::<T>() * p.eta * (params.epsilon * p.eta.norm_sqr()))
}

/// `η(t) = η₀e^{−iωt}`, `x(t) = x₀ + η₀(1 − e^{−iωt})/(iω)` with `ω = 2εE = ε|η₀|²`.
pub fn plane_exact_trajectory<T: Real>(
    p0: &PlanePhasePoint<T>,
    params: &PlaneParams<T>,
    t: T,
) -> PlanePhasePoint<T> {
    let omega = params.epsilon * p0.eta.norm_sqr();
    let z = i_unit::<T>() * (omega * t);
    PlanePhasePoint {
        x: p0.x + p0.eta * expm1c(-z) * t,
        eta: p0.eta * (-z).exp(),
    }
}

/// Centre, radius `1/(ε|η₀|)` and period `2π/(ε|η₀|²)` of the trajectory through `p0`.
pub fn plane_circle_params<T: Real>(p0: &PlanePhasePoint<T>, params: &PlaneParams<T>) -> Result<CircleMotion<T>> {
    let e = params.epsilon;
    if p0.eta.norm() == T::zero() {
        return Ok(CircleMotion::Point { x: p0.x });
    }
    if e == T::zero() {
        return Err(Error::InvalidParameter("undeformed motion is a straight line".into()));
    }
    let omega = e * p0.eta.norm_sqr();
    Ok(CircleMotion::Circle {
        center: p0.x + p0.eta / (i_unit::<T>() * omega),
        radius: (e * p0.eta.norm()).abs().recip(),
        period: lit::<T>(2.0) * T::PI() / omega.abs(),
    })
}

/// `ξ_L = e^{−i(ε/2)q̄p} q`, `ξ_R = e^{i(ε/2)q̄p} q`.
pub fn plane_qp_projections<T: Real>(c: &PlaneCotangentPoint<T>, params: &PlaneParams<T>) -> (C<T>, C<T>) {
    let phase = i_unit::<T>() * c.action() * (params.epsilon / lit(2.0));
    ((-phase).exp() * c.q, phase.exp() * c.q)
}

/// `J(q, p) = (P, −Im q̄p)` with `P = sin((ε/2)q̄p)/((ε/2)q̄)`.
pub fn plane_effective_momentum<T: Real>(c: &PlaneCotangentPoint<T>, params: &PlaneParams<T>) -> DualElement<T> {
    let w = c.action();
    DualElement { p: c.p * sinc(w * (params.epsilon / lit(2.0))), s: -w.im }
}

/// `q(t) = q₀ sin((ε/2)((qp̄)₀ + 2Et)) / sin((ε/2)(qp̄)₀)`.
pub fn plane_qp_trajectory<T: Real>(c0: &PlaneCotangentPoint<T>, params: &PlaneParams<T>, t: T) -> Result<C<T>> {
    let h = params.epsilon / lit(2.0);
    let two_e = plane_effective_momentum(c0, params).p.norm_sqr();
    let w_bar = c0.action().conj();
    let den = (w_bar * h).sin();
    if den.norm() <= T::min_positive_value() {
        return Err(Error::DivisionByZero("sin((ε/2)(qp̄)₀) vanishes".into()));
    }
    Ok(c0.q * ((w_bar + two_e * t) * h).sin() / den)
}

/// Closed-form flow of `½|P|²` in the commuting picture. `P` and `Im q̄p` are conserved and
/// `q̄p` grows at rate `|P|²`.
pub fn plane_qp_exact_flow<T: Real>(
    c0: &PlaneCotangentPoint<T>,
    params: &PlaneParams<T>,
    t: T,
) -> PlaneCotangentPoint<T> {
    let h = params.epsilon / lit(2.0);
    let big_p = plane_effective_momentum(c0, params).p;
    let energy = big_p.norm_sqr() / lit(2.0);
    let w0 = c0.action();
    let w = w0 + energy * lit(2.0) * t;
    let q = c0.q
        + big_p * ((w0.conj() + energy * t) * h).cos() * sinc(C::new(h * energy * t, T::zero())) * t;
    PlaneCotangentPoint { q, p: big_p / sinc(w * h) }
}

/// `(1/(2ε²))|1/ξ_L − 1/ξ_R|²`, which equals the Hamiltonian `½|η|²`.
pub fn plane_hamiltonian_identity<T: Real>(xi_l: C<T>, xi_r: C<T>, params: &PlaneParams<T>) -> Result<T> {
    let e = params.epsilon;
    if e == T::zero() {
        return Err(Error::InvalidParameter("epsilon must be nonzero".into()));
    }
    if xi_l.norm() == T::zero() || xi_r.norm() == T::zero() {
        return Err(Error::DivisionByZero("groupoid projection at the origin".into()));
    }
    Ok((xi_l.inv() - xi_r.inv()).norm_sqr() / (lit::<T>(2.0) * e * e))
}

/// Phase point with the same groupoid projections as `c`.
pub fn plane_convert<T: Real>(c: &PlaneCotangentPoint<T>, params: &PlaneParams<T>) -> PlanePhasePoint<T> {
    let e = params.epsilon;
    let i = i_unit::<T>();
    let w = c.action();
    let x = (-i * w * (e / lit(2.0))).exp() * c.q;
    // η = (1 − e^{−iεw})/(iεx̄)
    let eta = c.p * expm1c(-i * w * e) * (-i * w.conj() * (e / lit(2.0))).exp();
    PlanePhasePoint { x, eta }
}

/// Closed-form inverse of [`plane_convert`] on the principal branch of `log(1 − iεx̄η)`.
pub fn plane_invert<T: Real>(p: &PlanePhasePoint<T>, params: &PlaneParams<T>) -> Result<PlaneCotangentPoint<T>> {
    let e = params.epsilon;
    admissible_denominator(p, e)?;
    let i = i_unit::<T>();
    let xe = p.x.conj() * p.eta;
    let l = ln1pc(-i * xe * e);
    let w = xe * l;
    let h = e / lit(2.0);
    Ok(PlaneCotangentPoint {
        q: p.x * (i * w * h).exp(),
        p: p.eta * l * (i * w.conj() * h).exp(),
    })
}

/// Inverse of [`plane_convert`] by damped Newton iteration seeded at `(q, p) = (x, η)`.
pub fn plane_invert_newton<T: Real>(
    p: &PlanePhasePoint<T>,
    params: &PlaneParams<T>,
    tol: T,
) -> Result<PlaneCotangentPoint<T>> {
    admissible_denominator(p, params.epsilon)?;
    let target = p.to_array();
    let f = |v: &[T]| {
        let img = plane_convert(&PlaneCotangentPoint::from_slice(v), params).to_array();
        Ok((0..4).map(|k| img[k] - target[k]).collect())
    };
    let sol = newton::solve(f, target.to_vec(), tol, newton::MAX_ITERATIONS)?;
    Ok(PlaneCotangentPoint::from_slice(&sol))
}

/// `(x, η)` model with Hamiltonian `½|η|²`.
pub fn plane_model<T: Real>(params: PlaneParams<T>) -> PoissonModel<T> {
    let e = params.epsilon;
    PoissonModel::new(
        "plane",
        4,
        move |x: &[T]| plane_phase_brackets(&PlanePhasePoint::from_slice(x), &params),
        |x: &[T]| plane_hamiltonian(cx(x[2], x[3])),
        |x: &[T]| vec![T::zero(), T::zero(), x[2], x[3]],
    )
    .with_exact_flow(move |x: &[T], t: T| {
        plane_exact_trajectory(&PlanePhasePoint::from_slice(x), &params, t).to_array().to_vec()
    })
    .with_admissible(move |x: &[T]| PlanePhasePoint::from_slice(x).is_admissible(e))
    .with_monitor(Monitor::new("H", |x: &[T]| plane_hamiltonian(cx(x[2], x[3]))))
    .with_monitor(Monitor::new("absP", move |x: &[T]| {
        plane_moment(&PlanePhasePoint::from_slice(x), &params).map_or(T::nan(), |m| m.p.norm())
    }))
}

/// Commuting-coordinate model on `(q¹, q², p₁, p₂)` with `H = ½|P|²`.
pub fn plane_qp_model<T: Real>(params: PlaneParams<T>) -> PoissonModel<T> {
    let h = params.epsilon / lit(2.0);
    let energy = move |x: &[T]| {
        plane_effective_momentum(&PlaneCotangentPoint::from_slice(x), &params).p.norm_sqr() / lit(2.0)
    };
    PoissonModel::new(
        "plane-qp",
        4,
        |_x: &[T]| {
            let mut b = BracketMatrix::zeros(4);
            b.set_pair(2, 0, T::one());
            b.set_pair(3, 1, T::one());
            b
        },
        energy,
        move |x: &[T]| {
            let c = PlaneCotangentPoint::from_slice(x);
            let z = c.action() * h;
            let big_p = c.p * sinc(z);
            let half: T = lit(0.5);
            // Wirtinger derivatives of ½PP̄ with P holomorphic in (q̄, p).
            let d_p = big_p.conj() * z.cos() * half;
            let d_q = big_p * (c.p * c.p * sinc_prime(z) * h).conj() * half;
            let two: T = lit(2.0);
            vec![two * d_q.re, -two * d_q.im, two * d_p.re, -two * d_p.im]
        },
    )
    .with_exact_flow(move |x: &[T], t: T| {
        plane_qp_exact_flow(&PlaneCotangentPoint::from_slice(x), &params, t).to_array().to_vec()
    })
    .with_monitor(Monitor::new("H", energy))
    .with_monitor(Monitor::new("s", |x: &[T]| -PlaneCotangentPoint::from_slice(x).action().im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{compare_exact, hamiltonian_rhs, integrate, jacobi_residual, IntegratorConfig, Method};

    type Cf = Complex<f64>;
    type P = PlanePhasePoint<f64>;
    type Q = PlaneCotangentPoint<f64>;

    fn c(re: f64, im: f64) -> Cf {
        Cf::new(re, im)
    }

    fn pr(e: f64) -> PlaneParams<f64> {
        PlaneParams::new(e)
    }

    #[test]
    fn configuration_bracket() {
        assert_eq!(plane_config_bracket(c(0.0, 0.0), &pr(1.0)), 0.0);
        assert_eq!(plane_config_bracket(c(1.0, 0.0), &pr(1.0)), 2.0);
        let x = c(0.3, -0.8);
        let rot = x * Cf::from_polar(1.0, 1.1);
        assert!((plane_config_bracket(x, &pr(0.4)) - plane_config_bracket(rot, &pr(0.4))).abs() < 1e-16);
        let b = plane_phase_brackets(&P::new(x, c(0.0, 0.0)), &pr(0.4));
        assert!((2.0 * b.get(0, 1) - plane_config_bracket(x, &pr(0.4))).abs() < 1e-16);
    }

    #[test]
    fn brackets_reduce_to_canonical() {
        let b = plane_phase_brackets(&P::new(c(0.4, 1.0), c(-0.3, 0.2)), &pr(0.0));
        let expect = [[0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 0.0, -1.0], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]];
        for (i, row) in expect.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(b.get(i, j), *v);
            }
        }
        let b0 = plane_phase_brackets(&P::new(c(0.0, 0.0), c(0.0, 0.0)), &pr(0.7));
        assert_eq!(b0, b);
    }

    #[test]
    fn jacobi_holds() {
        let m = plane_model(pr(1.0));
        assert!(jacobi_residual(&m, &[0.3, -0.7, 0.5, 0.4], 1e-5) < 1e-6);
    }

    #[test]
    fn projections_and_matrix_route() {
        let p = P::new(c(1.0, 0.0), c(0.0, 1.0));
        let (l, r) = plane_projections(&p, &pr(1.0)).unwrap();
        assert_eq!(l, c(1.0, 0.0));
        assert!((r - c(0.5, 0.0)).norm() < 1e-16);
        let via = plane_right_projection_via_factorization(&p, &pr(1.0)).unwrap();
        assert!((via - r).norm() < 1e-15);
        let rest = P::new(c(0.2, 0.3), c(0.0, 0.0));
        assert_eq!(plane_projections(&rest, &pr(1.0)).unwrap(), (rest.x, rest.x));
        // 1 − iεx̄η = 0 at x = 1, η = −i, ε = 1.
        let sing = P::new(c(1.0, 0.0), c(0.0, -1.0));
        assert!(matches!(plane_projections(&sing, &pr(1.0)), Err(Error::OutsidePhaseSpace(_))));
    }

    #[test]
    fn moment_map() {
        let m = plane_moment(&P::new(c(0.3, 0.1), c(0.0, 0.0)), &pr(0.5)).unwrap();
        assert_eq!((m.p, m.s), (c(0.0, 0.0), 0.0));
        let p = P::new(c(0.8, -0.3), c(0.6, 1.1));
        let e = 0.9;
        let d = p.denominator(e);
        let m = plane_moment(&p, &pr(e)).unwrap();
        assert!((m.p - p.eta * d.norm() / d).norm() < 1e-15);
        assert!((m.s + d.norm().ln() / e).abs() < 1e-14);
        assert!((m.p.norm() - p.eta.norm()).abs() < 1e-15);
        // |right| = |x|/|D| = |x| e^{εs}
        let (_, r) = plane_projections(&p, &pr(e)).unwrap();
        assert!((r.norm() - p.x.norm() * (e * m.s).exp()).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_values() {
        assert_eq!(plane_hamiltonian(c(0.0, 0.0)), 0.0);
        assert_eq!(plane_hamiltonian(c(1.0, 0.0)), 0.5);
        let p = P::new(c(0.8, -0.3), c(0.6, 1.1));
        let m = plane_moment(&p, &pr(0.4)).unwrap();
        assert!((plane_hamiltonian(p.eta) - 0.5 * m.p.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn eom_matches_engine() {
        let params = pr(0.3);
        let p = P::new(c(0.8, -0.3), c(0.6, 1.1));
        let (dx, de) = plane_eom_rhs(&p, &params);
        let eng = hamiltonian_rhs(&plane_model(params), &p.to_array());
        let direct = [dx.re, dx.im, de.re, de.im];
        for k in 0..4 {
            assert!((eng[k] - direct[k]).abs() < 1e-13);
        }
        assert!((de * p.eta.conj()).re.abs() < 1e-16);
        assert_eq!(plane_eom_rhs(&P::new(p.x, c(0.0, 0.0)), &params), (c(0.0, 0.0), c(0.0, 0.0)));
        assert_eq!(plane_eom_rhs(&p, &pr(0.0)).1, c(0.0, 0.0));
    }

    #[test]
    fn exact_trajectory_is_circle() {
        let params = pr(0.1);
        let p0 = P::new(c(0.0, 0.0), c(1.0, 0.0));
        let CircleMotion::Circle { center, radius, period } = plane_circle_params(&p0, &params).unwrap() else {
            panic!("expected a circle");
        };
        assert!((radius - 10.0).abs() < 1e-14);
        for k in 0..100 {
            let p = plane_exact_trajectory(&p0, &params, period * k as f64 / 100.0);
            assert!(((p.x - center).norm() - radius).abs() < 1e-10);
        }
        assert!((plane_exact_trajectory(&p0, &params, period).x - p0.x).norm() < 1e-10);
        let fast = P::new(c(0.0, 0.0), c(2.0, 0.0));
        let CircleMotion::Circle { radius: r2, .. } = plane_circle_params(&fast, &params).unwrap() else {
            panic!()
        };
        assert!((r2 - radius / 2.0).abs() < 1e-14);
        assert_eq!(
            plane_circle_params(&P::new(c(1.0, 2.0), c(0.0, 0.0)), &params).unwrap(),
            CircleMotion::Point { x: c(1.0, 2.0) }
        );
        let rest = P::new(c(1.0, 2.0), c(0.0, 0.0));
        assert_eq!(plane_exact_trajectory(&rest, &params, 3.0), rest);
    }

    #[test]
    fn rk4_matches_exact_over_a_period() {
        let params = pr(0.1);
        let p0 = P::new(c(0.0, 0.0), c(1.0, 0.0));
        let period = 2.0 * std::f64::consts::PI / 0.1;
        let cfg = IntegratorConfig::new(period / 2000.0, period);
        let (rep, _) = compare_exact(&plane_model(params), &p0.to_array(), &cfg, Method::Rk4).unwrap();
        assert!(rep.max_deviation <= 1e-8, "{}", rep.max_deviation);
    }

    #[test]
    fn qp_projections_and_momentum() {
        let params = pr(0.7);
        let cq = Q::new(c(0.5, -0.4), c(0.9, 0.3));
        let (l, r) = plane_qp_projections(&cq, &params);
        assert!((l * r - cq.q * cq.q).norm() < 1e-15);
        assert_eq!(plane_qp_projections(&Q::new(cq.q, c(0.0, 0.0)), &params), (cq.q, cq.q));
        let m = plane_effective_momentum(&cq, &pr(1e-9));
        assert!((m.p - cq.p).norm() < 1e-15);
        assert_eq!(plane_effective_momentum(&Q::new(cq.q, c(0.0, 0.0)), &params).p, c(0.0, 0.0));
        // Direct formula away from the origin.
        let w = cq.q.conj() * cq.p;
        let direct = (w * 0.35).sin() / (cq.q.conj() * 0.35);
        assert!((plane_effective_momentum(&cq, &params).p - direct).norm() < 1e-15);
    }

    #[test]
    fn conversions_match_projections_and_moments() {
        let params = pr(0.6);
        let cq = Q::new(c(0.5, -0.4), c(0.9, 0.3));
        let x = plane_convert(&cq, &params);
        let (xl, xr) = plane_projections(&x, &params).unwrap();
        let (ql, qr) = plane_qp_projections(&cq, &params);
        assert!((xl - ql).norm() < 1e-14 && (xr - qr).norm() < 1e-14);
        let mx = plane_moment(&x, &params).unwrap();
        let mq = plane_effective_momentum(&cq, &params);
        assert!((mx.p - mq.p).norm() < 1e-14 && (mx.s - mq.s).abs() < 1e-14);
        assert_eq!(plane_convert(&Q::new(cq.q, c(0.0, 0.0)), &params), P::new(cq.q, c(0.0, 0.0)));
        let back = plane_invert(&x, &params).unwrap();
        assert!((back.q - cq.q).norm() < 1e-14 && (back.p - cq.p).norm() < 1e-14);
        let newton = plane_invert_newton(&x, &params, 1e-12).unwrap();
        assert!((newton.q - cq.q).norm() < 1e-10 && (newton.p - cq.p).norm() < 1e-10);
    }

    #[test]
    fn hamiltonian_identity() {
        let params = pr(0.8);
        let p = P::new(c(0.8, -0.3), c(0.6, 1.1));
        let (l, r) = plane_projections(&p, &params).unwrap();
        let v = plane_hamiltonian_identity(l, r, &params).unwrap();
        assert!((v - plane_hamiltonian(p.eta)).abs() < 1e-12);
        assert_eq!(plane_hamiltonian_identity(l, l, &params).unwrap(), 0.0);
        let rot = Cf::from_polar(1.0, 0.9);
        let v2 = plane_hamiltonian_identity(l * rot, r * rot, &params).unwrap();
        assert!((v - v2).abs() < 1e-14);
        assert!(matches!(
            plane_hamiltonian_identity(c(0.0, 0.0), r, &params),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn qp_flow_conserves_momentum_and_advances_action() {
        let params = pr(0.5);
        let model = plane_qp_model(params);
        let c0 = Q::new(c(0.5, -0.4), c(0.9, 0.3));
        let m0 = plane_effective_momentum(&c0, &params);
        let t_end = 3.0;
        let tr = integrate(&model, &c0.to_array(), &IntegratorConfig::new(1e-3, t_end), Method::Rk4).unwrap();
        let end = Q::from_slice(tr.last_state());
        let m1 = plane_effective_momentum(&end, &params);
        assert!((m1.p - m0.p).norm() < 1e-10);
        let dw = end.action() - c0.action();
        assert!((dw - c(m0.p.norm_sqr() * t_end, 0.0)).norm() < 1e-9);
        let (rep, _) = compare_exact(&model, &c0.to_array(), &IntegratorConfig::new(1e-3, t_end), Method::Rk4).unwrap();
        assert!(rep.max_deviation < 1e-10, "{}", rep.max_deviation);
    }

    #[test]
    fn qp_trajectory_formula() {
        let params = pr(0.5);
        let c0 = Q::new(c(0.5, -0.4), c(0.9, 0.3));
        assert!((plane_qp_trajectory(&c0, &params, 0.0).unwrap() - c0.q).norm() < 1e-15);
        for k in 0..10 {
            let t = 0.37 * k as f64;
            let a = plane_qp_trajectory(&c0, &params, t).unwrap();
            let b = plane_qp_exact_flow(&c0, &params, t).q;
            assert!((a - b).norm() < 1e-12);
        }
        assert!(matches!(
            plane_qp_trajectory(&Q::new(c0.q, c(0.0, 0.0)), &params, 1.0),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn qp_gradient_matches_finite_differences() {
        let model = plane_qp_model(pr(0.8));
        let x = [0.5, -0.4, 0.9, 0.3];
        let g = model.gradient(&x);
        for k in 0..4 {
            let h = 1e-6;
            let (mut a, mut b) = (x, x);
            a[k] += h;
            b[k] -= h;
            let fd = (model.hamiltonian(&a) - model.hamiltonian(&b)) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-8, "component {k}: {fd} vs {}", g[k]);
        }
    }
}
