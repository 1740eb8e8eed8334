//! The Poisson sphere `S² = SU(2)/S¹`.
//!
//! Phase points are `ξ = g·b ∈ SL(2,ℂ)` with `g ∈ SU(2)` and `b` in the upper-triangular dual
//! group, parametrized as `b = [[e^{εs}, 2εw], [0, e^{−εs}]]`. The free flow is
//! `g⁻¹ġ = F(b)`, `ḃ = 0`, so `g(t)` is a translated one-parameter subgroup ("big circle")
//! and its projection to the sphere is a circle.
//!
//! The projection is `g ↦ Ad_g(J₃)` in the orthonormal basis `(J₁, J₂, J₃)`. Under the metric
//! `−½ Re tr(XY)`, `Ad_{exp(tX)}` rotates by the angle `2|X|t` about `X`.

use num_complex::Complex;

use crate::engine::{Dynamics, Monitor};
use crate::error::{Error, Result};
use crate::matrix::{factor_su2_borel, su2_exp, su2_metric, BorelElement, Mat2C, SU2Element, Su2Vector, TOL_GROUP};
use crate::scalar::{lit, real, to_f64, Real};

type C<T> = Complex<T>;

/// Samples whose spread about their mean is below this are a single point.
pub const POINT_SPREAD_TOL: f64 = 1e-9;
/// `|cos_polar|` below this classifies a circle as great.
pub const GREAT_CIRCLE_TOL: f64 = 1e-8;
pub const MIN_CIRCLE_SAMPLES: usize = 8;
/// Tolerance of [`perpendicularity_criterion`] and [`sphere_constraint_check`].
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereParams<T> {
    pub epsilon: T,
}

impl<T: Real> SphereParams<T> {
    pub fn new(epsilon: T) -> Self {
        Self { epsilon }
    }
}

/// Dual group element `b = [[e^{εs}, 2εw], [0, e^{−εs}]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualSphereElement<T> {
    pub s: T,
    pub w: C<T>,
}

impl<T: Real> DualSphereElement<T> {
    pub fn new(s: T, w: C<T>) -> Self {
        Self { s, w }
    }

    pub fn to_borel(&self, epsilon: T) -> BorelElement<T> {
        BorelElement { rho: (epsilon * self.s).exp(), n: self.w * (lit::<T>(2.0) * epsilon) }
    }

    pub fn from_borel(b: &BorelElement<T>, epsilon: T) -> Result<Self> {
        if epsilon == T::zero() {
            return Err(Error::InvalidParameter("epsilon must be nonzero".into()));
        }
        Ok(Self { s: b.rho.ln() / epsilon, w: b.n / (lit::<T>(2.0) * epsilon) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePhasePoint<T> {
    pub g: SU2Element<T>,
    pub b: DualSphereElement<T>,
}

impl<T: Real> SpherePhasePoint<T> {
    pub fn new(g: SU2Element<T>, b: DualSphereElement<T>) -> Self {
        Self { g, b }
    }

    /// `ξ = g·b`.
    pub fn xi(&self, params: &SphereParams<T>) -> Mat2C<T> {
        *self.g.matrix() * self.b.to_borel(params.epsilon).matrix()
    }

    /// Recovers `(g, b)` from `ξ` through the positive-diagonal factorization.
    pub fn from_xi(xi: &Mat2C<T>, params: &SphereParams<T>) -> Result<Self> {
        let (g, b) = factor_su2_borel(xi)?;
        Ok(Self { g, b: DualSphereElement::from_borel(&b, params.epsilon)? })
    }

    /// Flat state `[Re u, Im u, Re v, Im v, s, Re w, Im w]` with `(u, v)` the first column of `g`.
    pub fn to_state(&self) -> [T; 7] {
        let (u, v) = (self.g.u(), self.g.v());
        [u.re, u.im, v.re, v.im, self.b.s, self.b.w.re, self.b.w.im]
    }

    /// Inverse of [`Self::to_state`]; the column is renormalized onto SU(2).
    pub fn from_state(x: &[T]) -> Self {
        Self {
            g: SU2Element::from_column(C::new(x[0], x[1]), C::new(x[2], x[3])),
            b: DualSphereElement::new(x[4], C::new(x[5], x[6])),
        }
    }
}

/// Unit vector `(n1, n2, n3)` in the `(J₁, J₂, J₃)` frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint<T> {
    pub n1: T,
    pub n2: T,
    pub n3: T,
}

impl<T: Real> SpherePoint<T> {
    pub fn new(n1: T, n2: T, n3: T) -> Self {
        Self { n1, n2, n3 }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.n1, self.n2, self.n3]
    }

    pub fn to_vector(self) -> Su2Vector<T> {
        Su2Vector::new(self.n1, self.n2, self.n3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircleKind {
    Point,
    GreatCircle,
    SmallCircle,
}

impl CircleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CircleKind::Point => "point",
            CircleKind::GreatCircle => "great_circle",
            CircleKind::SmallCircle => "small_circle",
        }
    }
}

/// Geometry of a circle on the unit sphere.
///
/// The circle lies in the plane `axis·n = cos_polar`; `axis` is oriented so `cos_polar ≥ 0`, and
/// for great circles so that the motion is counter-clockwise about it. `angular_speed` is the
/// signed rate of rotation about `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleReport<T> {
    pub kind: CircleKind,
    pub axis: [T; 3],
    pub cos_polar: T,
    pub angular_speed: T,
    pub fit_residual: T,
}

impl<T: Real> CircleReport<T> {
    /// The same circle after applying `Ad_g`.
    pub fn transported(&self, g: &SU2Element<T>) -> Self {
        Self { axis: g.adjoint_action(Su2Vector::from_array(self.axis)).to_array(), ..*self }
    }
}

/// `½(k₁² + k₂² + k₃²)`.
pub fn sphere_classical_hamiltonian<T: Real>(j: Su2Vector<T>) -> T {
    su2_metric(j, j) / lit(2.0)
}

/// `Ad_g(J₃)`.
pub fn hopf_project<T: Real>(g: &SU2Element<T>) -> SpherePoint<T> {
    let n = g.adjoint_action(Su2Vector::j3());
    SpherePoint::new(n.k1, n.k2, n.k3)
}

/// `g₀·exp(tX)`.
pub fn big_circle<T: Real>(g0: &SU2Element<T>, x: Su2Vector<T>, t: T) -> SU2Element<T> {
    g0.compose(&su2_exp(x.scale(t)))
}

/// True when `X ⊥ J₃`, i.e. the big circle through `X` projects to a great circle or a point.
pub fn perpendicularity_criterion<T: Real>(x: Su2Vector<T>) -> bool {
    su2_metric(x, Su2Vector::j3()).abs() <= lit(ORTHOGONALITY_TOL)
}

/// True when `b` lies in the annihilator of the stabilizer, i.e. `s = 0`.
pub fn sphere_constraint_check<T: Real>(b: &DualSphereElement<T>) -> bool {
    b.s.abs() <= lit(ORTHOGONALITY_TOL)
}

fn half_excess<T: Real>(xi: &Mat2C<T>) -> T {
    // ½ tr ξ†ξ − Re det ξ, free of cancellation.
    ((xi.a - xi.d.conj()).norm_sqr() + (xi.b + xi.c.conj()).norm_sqr()) / lit(2.0)
}

/// `H = ½ tr ξ†ξ` and `H̃ = (H − 1)/(4ε²)` for `det ξ = 1`.
pub fn sphere_deformed_hamiltonian<T: Real>(xi: &Mat2C<T>, params: &SphereParams<T>) -> Result<(T, T)> {
    let e = params.epsilon;
    if e == T::zero() {
        return Err(Error::InvalidParameter("epsilon must be nonzero".into()));
    }
    let scale = T::one().max(xi.frobenius_sqr());
    if (xi.det() - C::new(T::one(), T::zero())).norm() > lit::<T>(TOL_GROUP) * scale {
        return Err(Error::InvalidInput(format!("det ξ = {} is not 1", to_f64(xi.det().re))));
    }
    let excess = half_excess(xi);
    Ok((T::one() + excess, excess / (lit::<T>(4.0) * e * e)))
}

/// `H̃` as a function of `b` alone: `½(sinh²(εs)/ε² + |w|²)`. Regular at `ε = 0`.
pub fn sphere_dual_hamiltonian<T: Real>(b: &DualSphereElement<T>, params: &SphereParams<T>) -> T {
    let sh = b.s * real::shc(params.epsilon * b.s);
    (sh * sh + b.w.norm_sqr()) / lit(2.0)
}

/// Deformed Legendre map
/// `F(b) = (i/2)[[(2ε)⁻¹sinh 2εs + ε|w|², we^{−εs}], [w̄e^{−εs}, −(2ε)⁻¹sinh 2εs − ε|w|²]]`.
pub fn sphere_legendre<T: Real>(b: &DualSphereElement<T>, params: &SphereParams<T>) -> Su2Vector<T> {
    let e = params.epsilon;
    let half: T = lit(0.5);
    let we = b.w * (-e * b.s).exp();
    let diag = b.s * real::shc(lit::<T>(2.0) * e * b.s) + e * b.w.norm_sqr();
    Su2Vector::new(half * we.re, half * we.im, half * diag)
}

/// `g(t) = g₀ exp(tF(b₀))`, `b(t) = b₀`.
pub fn sphere_phase_trajectory<T: Real>(
    p0: &SpherePhasePoint<T>,
    params: &SphereParams<T>,
    t: T,
) -> SpherePhasePoint<T> {
    SpherePhasePoint { g: big_circle(&p0.g, sphere_legendre(&p0.b, params), t), b: p0.b }
}

/// Closed-form geometry of the projected trajectory with `g₀ = 1`; transport with
/// [`CircleReport::transported`] for other starting points.
///
/// For `s = 0` the circle has `cos_polar = ε|w|/√(1 + ε²|w|²)` and angular speed
/// `|w|√(1 + ε²|w|²)`, so it is never great unless `w = 0`, where it degenerates to a point.
pub fn sphere_circle_geometry<T: Real>(b: &DualSphereElement<T>, params: &SphereParams<T>) -> CircleReport<T> {
    axis_report(sphere_legendre(b, params))
}

/// Analytic geometry of `t ↦ Ad_{exp(tX)}(J₃)`.
fn axis_report<T: Real>(x: Su2Vector<T>) -> CircleReport<T> {
    let norm = x.norm();
    let Some(unit) = x.normalized().filter(|_| norm > T::zero()) else {
        return CircleReport {
            kind: CircleKind::Point,
            axis: [T::zero(), T::zero(), T::one()],
            cos_polar: T::one(),
            angular_speed: T::zero(),
            fit_residual: T::zero(),
        };
    };
    let cos = su2_metric(unit, Su2Vector::j3());
    let sign = if cos < T::zero() { -T::one() } else { T::one() };
    let kind = if cos.abs() < lit(GREAT_CIRCLE_TOL) {
        CircleKind::GreatCircle
    } else if (cos.abs() - T::one()).abs() <= T::epsilon() {
        CircleKind::Point
    } else {
        CircleKind::SmallCircle
    };
    CircleReport {
        kind,
        axis: unit.scale(sign).to_array(),
        cos_polar: cos.abs(),
        angular_speed: if kind == CircleKind::Point { T::zero() } else { sign * lit::<T>(2.0) * norm },
        fit_residual: T::zero(),
    }
}

/// Analytic geometry of the projected big circle `t ↦ g₀ exp(tX)`.
pub fn big_circle_geometry<T: Real>(g0: &SU2Element<T>, x: Su2Vector<T>) -> CircleReport<T> {
    axis_report(x).transported(g0)
}

/// Time for the projected circle to close: `π/|F|`. `None` for a resting particle.
pub fn sphere_circle_period<T: Real>(b: &DualSphereElement<T>, params: &SphereParams<T>) -> Option<T> {
    let f = sphere_legendre(b, params).norm();
    (f > T::zero()).then(|| T::PI() / f)
}

/// `count` projected points of the trajectory through `p0`, evenly spaced over one circle
/// period (or unit time at rest). Returns the samples and their spacing in time.
pub fn sphere_projected_samples<T: Real>(
    p0: &SpherePhasePoint<T>,
    params: &SphereParams<T>,
    count: usize,
) -> (Vec<SpherePoint<T>>, T) {
    let span = sphere_circle_period(&p0.b, params).unwrap_or_else(T::one);
    let dt = span / lit(count.max(1) as f64);
    let pts = (0..count)
        .map(|k| hopf_project(&sphere_phase_trajectory(p0, params, dt * lit(k as f64)).g))
        .collect();
    (pts, dt)
}

/// `count` projected points of the big circle `g₀ exp(tX)` over one closing period `π/|X|`.
pub fn big_circle_samples<T: Real>(g0: &SU2Element<T>, x: Su2Vector<T>, count: usize) -> (Vec<SpherePoint<T>>, T) {
    let norm = x.norm();
    let span = if norm > T::zero() { T::PI() / norm } else { T::one() };
    let dt = span / lit(count.max(1) as f64);
    let pts = (0..count).map(|k| hopf_project(&big_circle(g0, x, dt * lit(k as f64)))).collect();
    (pts, dt)
}

type M3<T> = [[T; 3]; 3];

/// Eigen-decomposition of a symmetric 3×3 matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the matrix whose columns are the eigenvectors.
fn symmetric_eigen3<T: Real>(mut a: M3<T>) -> ([T; 3], M3<T>) {
    let mut v = [[T::zero(); 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    for _sweep in 0..50 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        let diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
        if off <= T::epsilon() * T::epsilon() * diag * lit(1e-4) || off == T::zero() {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == T::zero() {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (lit::<T>(2.0) * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
            let c = (t * t + T::one()).sqrt().recip();
            let s = t * c;
            let mut j = [[T::zero(); 3]; 3];
            for (i, row) in j.iter_mut().enumerate() {
                row[i] = T::one();
            }
            j[p][p] = c;
            j[q][q] = c;
            j[p][q] = s;
            j[q][p] = -s;
            a = mul3(&transpose3(&j), &mul3(&a, &j));
            v = mul3(&v, &j);
        }
    }
    ([a[0][0], a[1][1], a[2][2]], v)
}

fn mul3<T: Real>(x: &M3<T>, y: &M3<T>) -> M3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(T::zero(), |acc, k| acc + x[i][k] * y[k][j]);
        }
    }
    out
}

fn transpose3<T: Real>(x: &M3<T>) -> M3<T> {
    let mut out = *x;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = x[j][i];
        }
    }
    out
}

/// Fits a plane to points on the unit sphere and classifies the circle it cuts out.
///
/// `sample_dt` is the time between consecutive samples and only scales `angular_speed`.
pub fn classify_projected_circle<T: Real>(samples: &[SpherePoint<T>], sample_dt: T) -> Result<CircleReport<T>> {
    classify_projected_circle_with_tol(samples, sample_dt, lit(GREAT_CIRCLE_TOL))
}

pub fn classify_projected_circle_with_tol<T: Real>(
    samples: &[SpherePoint<T>],
    sample_dt: T,
    tol_great: T,
) -> Result<CircleReport<T>> {
    if samples.len() < MIN_CIRCLE_SAMPLES {
        return Err(Error::TooFewSamples { got: samples.len(), need: MIN_CIRCLE_SAMPLES });
    }
    let n: T = lit(samples.len() as f64);
    let pts: Vec<Su2Vector<T>> = samples.iter().map(|p| p.to_vector()).collect();
    let mean = pts.iter().fold(Su2Vector::zero(), |acc, p| acc + *p).scale(n.recip());
    let centred: Vec<[T; 3]> = pts.iter().map(|p| (*p - mean).to_array()).collect();
    let spread = centred
        .iter()
        .map(|r| Su2Vector::from_array(*r).norm())
        .fold(T::zero(), T::max);
    if spread < lit(POINT_SPREAD_TOL) {
        let axis = mean.normalized().unwrap_or_else(Su2Vector::j3);
        return Ok(CircleReport {
            kind: CircleKind::Point,
            axis: axis.to_array(),
            cos_polar: T::one(),
            angular_speed: T::zero(),
            fit_residual: spread,
        });
    }
    let mut cov = [[T::zero(); 3]; 3];
    for r in &centred {
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] = cov[i][j] + r[i] * r[j] / n;
            }
        }
    }
    let (vals, vecs) = symmetric_eigen3(cov);
    let k = (0..3).fold(0, |best, i| if vals[i] < vals[best] { i } else { best });
    let mut axis = Su2Vector::new(vecs[0][k], vecs[1][k], vecs[2][k]);
    axis = axis.normalized().unwrap_or(axis);
    let mut cos = axis.dot(mean);
    if cos < T::zero() {
        axis = axis.scale(-T::one());
        cos = -cos;
    }
    let fit_residual = centred
        .iter()
        .map(|r| axis.dot(Su2Vector::from_array(*r)).abs())
        .fold(T::zero(), T::max);

    // In-plane angle of each sample about the axis.
    let first = Su2Vector::from_array(centred[0]);
    let e1 = (first - axis.scale(axis.dot(first))).normalized().unwrap_or(first);
    let e2 = axis.cross(e1);
    let angles: Vec<T> = centred
        .iter()
        .map(|r| {
            let r = Su2Vector::from_array(*r);
            r.dot(e2).atan2(r.dot(e1))
        })
        .collect();
    let two_pi = lit::<T>(2.0) * T::PI();
    let total = angles.windows(2).fold(T::zero(), |acc, w| {
        let mut d = w[1] - w[0];
        if d > T::PI() {
            d = d - two_pi;
        } else if d <= -T::PI() {
            d = d + two_pi;
        }
        acc + d
    });
    let mut speed = total / (lit::<T>((samples.len() - 1) as f64) * sample_dt);

    let kind = if cos < tol_great { CircleKind::GreatCircle } else { CircleKind::SmallCircle };
    if kind == CircleKind::GreatCircle && speed < T::zero() {
        axis = axis.scale(-T::one());
        cos = -cos;
        speed = -speed;
    }
    Ok(CircleReport { kind, axis: axis.to_array(), cos_polar: cos, angular_speed: speed, fit_residual })
}

/// The flow `g⁻¹ġ = F(b)`, `ḃ = 0` on the flat state of [`SpherePhasePoint::to_state`].
///
/// Monitors `Htilde` (evaluated on the raw state, without projecting `g` back onto SU(2))
/// and `unitarity` (`|u|² + |v|² − 1`).
#[derive(Debug, Clone)]
pub struct SphereFlow<T> {
    pub params: SphereParams<T>,
    monitors: Vec<Monitor<T>>,
}

impl<T: Real> SphereFlow<T> {
    pub fn new(params: SphereParams<T>) -> Self {
        let e = params.epsilon;
        let htilde = move |x: &[T]| {
            let (u, v) = (C::new(x[0], x[1]), C::new(x[2], x[3]));
            let g = Mat2C::new(u, -v.conj(), v, u.conj());
            let xi = g * DualSphereElement::new(x[4], C::new(x[5], x[6])).to_borel(e).matrix();
            // ½ tr ξ†ξ − 1 = half_excess + (Re det ξ − 1), exact for any state.
            let excess = half_excess(&xi) + (u.norm_sqr() + v.norm_sqr() - T::one());
            excess / (lit::<T>(4.0) * e * e)
        };
        let unitarity = |x: &[T]| x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - T::one();
        Self {
            params,
            monitors: vec![Monitor::new("Htilde", htilde), Monitor::new("unitarity", unitarity)],
        }
    }
}

impl<T: Real> Dynamics<T> for SphereFlow<T> {
    fn dim(&self) -> usize {
        7
    }

    fn rhs(&self, x: &[T]) -> Vec<T> {
        let f = sphere_legendre(&DualSphereElement::new(x[4], C::new(x[5], x[6])), &self.params);
        let fa = C::new(T::zero(), f.k3);
        let fc = C::new(f.k2, f.k1);
        let (u, v) = (C::new(x[0], x[1]), C::new(x[2], x[3]));
        // First column of g·F.
        let du = u * fa - v.conj() * fc;
        let dv = v * fa + u.conj() * fc;
        vec![du.re, du.im, dv.re, dv.im, T::zero(), T::zero(), T::zero()]
    }

    fn monitors(&self) -> &[Monitor<T>] {
        &self.monitors
    }

    fn exact_flow(&self, x: &[T], t: T) -> Option<Vec<T>> {
        let p = SpherePhasePoint::from_state(x);
        Some(sphere_phase_trajectory(&p, &self.params, t).to_state().to_vec())
    }
}
