//! Two-dimensional Minkowski space-time with deformation parameter ε.
//!
//! Positions are light-cone coordinates `x = (x⁺, x⁻)` and momenta `η = (η₊, η₋)` in the
//! annihilator subgroup of the dual group. The phase space is the connected component where
//! `1 + εη₋x⁻ > 0` and `1 − εη₊x⁺ > 0`.
//!
//! The commuting picture uses canonical `(q, p)` with `{p₊, q⁺} = {p₋, q⁻} = 1`. In both
//! pictures the Hamiltonian is `η₊η₋ = P₊P₋` and the mass shell is its level set `m²`.

use crate::engine::{BracketMatrix, Monitor, PoissonModel};
use crate::error::{Error, Result};
use crate::newton;
use crate::scalar::{asinhc, lit, real, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkParams<T> {
    pub epsilon: T,
    pub m: T,
}

impl<T: Real> MinkParams<T> {
    pub fn new(epsilon: T, m: T) -> Self {
        Self { epsilon, m }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkPhasePoint<T> {
    pub xplus: T,
    pub xminus: T,
    pub etaplus: T,
    pub etaminus: T,
}

impl<T: Real> MinkPhasePoint<T> {
    pub fn new(xplus: T, xminus: T, etaplus: T, etaminus: T) -> Self {
        Self { xplus, xminus, etaplus, etaminus }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.xplus, self.xminus, self.etaplus, self.etaminus]
    }

    pub fn from_slice(s: &[T]) -> Self {
        Self::new(s[0], s[1], s[2], s[3])
    }

    /// `η₊η₋`, the transported Casimir.
    pub fn casimir(&self) -> T {
        self.etaplus * self.etaminus
    }

    /// `(1 + εη₋x⁻, 1 − εη₊x⁺)`.
    pub fn factors(&self, epsilon: T) -> (T, T) {
        (
            T::one() + epsilon * self.etaminus * self.xminus,
            T::one() - epsilon * self.etaplus * self.xplus,
        )
    }

    pub fn is_admissible(&self, epsilon: T) -> bool {
        let (a, b) = self.factors(epsilon);
        a > T::zero() && b > T::zero()
    }

    pub fn on_mass_shell(&self, m: T, tol: T) -> bool {
        (self.casimir() - m * m).abs() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkCotangentPoint<T> {
    pub qplus: T,
    pub qminus: T,
    pub pplus: T,
    pub pminus: T,
}

impl<T: Real> MinkCotangentPoint<T> {
    pub fn new(qplus: T, qminus: T, pplus: T, pminus: T) -> Self {
        Self { qplus, qminus, pplus, pminus }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.qplus, self.qminus, self.pplus, self.pminus]
    }

    pub fn from_slice(s: &[T]) -> Self {
        Self::new(s[0], s[1], s[2], s[3])
    }
}

/// Value of the moment map in the dual group: `(P₊, P₋, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkMoment<T> {
    pub pplus: T,
    pub pminus: T,
    pub s: T,
}

/// Moment map in the commuting picture, with the action variables `Π± = p±q±`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkQpMoment<T> {
    pub pplus: T,
    pub pminus: T,
    pub s: T,
    pub piplus: T,
    pub piminus: T,
}

fn require_admissible<T: Real>(p: &MinkPhasePoint<T>, epsilon: T) -> Result<(T, T)> {
    let (fm, fp) = p.factors(epsilon);
    if !(fm > T::zero() && fp > T::zero()) {
        return Err(Error::OutsidePhaseSpace(format!(
            "1 + εη₋x⁻ = {}, 1 − εη₊x⁺ = {}",
            to_f64(fm),
            to_f64(fp)
        )));
    }
    Ok((fm, fp))
}

/// Poisson brackets on the phase space, ordered `(x⁺, x⁻, η₊, η₋)`.
pub fn mink_brackets<T: Real>(p: &MinkPhasePoint<T>, params: &MinkParams<T>) -> BracketMatrix<T> {
    let e = params.epsilon;
    let (xp, xm, ep, em) = (p.xplus, p.xminus, p.etaplus, p.etaminus);
    let mut b = BracketMatrix::zeros(4);
    b.set_pair(0, 1, e * xp * xm);
    b.set_pair(2, 3, e * ep * em);
    b.set_pair(2, 0, T::one() - e * ep * xp);
    b.set_pair(2, 1, -e * ep * xm);
    b.set_pair(3, 0, e * em * xp);
    b.set_pair(3, 1, T::one() + e * em * xm);
    b
}

pub fn mink_left_projection<T: Real>(p: &MinkPhasePoint<T>) -> (T, T) {
    (p.xplus, p.xminus)
}

/// `(x⁺/(1 + εη₋x⁻), x⁻/(1 − εη₊x⁺))`.
pub fn mink_right_projection<T: Real>(
    p: &MinkPhasePoint<T>,
    params: &MinkParams<T>,
) -> Result<(T, T)> {
    let (fm, fp) = require_admissible(p, params.epsilon)?;
    Ok((p.xplus / fm, p.xminus / fp))
}

/// Moment map `(η₊√(f₋/f₊), η₋√(f₊/f₋), −(1/ε) log(f₋f₊))` with `f₋ = 1 + εη₋x⁻` and
/// `f₊ = 1 − εη₊x⁺`. The reciprocal roots make `P₊P₋ = η₊η₋`.
pub fn mink_moment<T: Real>(p: &MinkPhasePoint<T>, params: &MinkParams<T>) -> Result<MinkMoment<T>> {
    let e = params.epsilon;
    let (fm, fp) = require_admissible(p, e)?;
    let root = (fm / fp).sqrt();
    // −(1/ε) log(fm·fp), written to stay finite as ε → 0.
    let a = p.etaminus * p.xminus;
    let b = p.etaplus * p.xplus;
    let s = -(a * real::ln1pc(e * a) - b * real::ln1pc(-e * b));
    Ok(MinkMoment { pplus: p.etaplus * root, pminus: p.etaminus / root, s })
}

/// `(ẋ⁺, ẋ⁻, η̇₊, η̇₋) = (η₋, η₊, −εη₋η₊², εη₊η₋²)`.
pub fn mink_eom_rhs<T: Real>(p: &MinkPhasePoint<T>, params: &MinkParams<T>) -> [T; 4] {
    let e = params.epsilon;
    let (ep, em) = (p.etaplus, p.etaminus);
    [em, ep, -e * em * ep * ep, e * ep * em * em]
}

/// Closed-form flow of the free Hamiltonian `η₊η₋`.
///
/// With `κ = εη₊η₋`: `η₊(t) = η₊e^{−κt}`, `η₋(t) = η₋e^{κt}` and the positions integrate these
/// exactly. The expressions use `(e^u − 1)/u`, so `κ = 0` gives straight lines.
pub fn mink_exact_trajectory<T: Real>(
    p0: &MinkPhasePoint<T>,
    params: &MinkParams<T>,
    t: T,
) -> MinkPhasePoint<T> {
    let kappa = params.epsilon * p0.casimir();
    let u = kappa * t;
    MinkPhasePoint {
        xplus: p0.xplus + p0.etaminus * t * real::expm1c(u),
        xminus: p0.xminus + p0.etaplus * t * real::expm1c(-u),
        etaplus: p0.etaplus * (-u).exp(),
        etaminus: p0.etaminus * u.exp(),
    }
}

/// Centre `(c⁺, c⁻)` of the world-line hyperbola, conserved along the flow.
/// `None` when `εη₊η₋ = 0` (straight-line motion).
pub fn mink_hyperbola_center<T: Real>(p: &MinkPhasePoint<T>, params: &MinkParams<T>) -> Option<(T, T)> {
    let kappa = params.epsilon * p.casimir();
    (kappa != T::zero()).then(|| (p.xplus - p.etaminus / kappa, p.xminus + p.etaplus / kappa))
}

/// `(x⁺ − c⁺)(x⁻ − c⁻) + 1/(ε²m²)`, zero on the world line of mass `m`.
pub fn mink_hyperbola_residual<T: Real>(
    p: &MinkPhasePoint<T>,
    center: (T, T),
    params: &MinkParams<T>,
) -> T {
    let e = params.epsilon;
    (p.xplus - center.0) * (p.xminus - center.1) + T::one() / (e * e * params.m * params.m)
}

/// Left and right groupoid projections of a cotangent point.
pub fn mink_qp_projections<T: Real>(
    c: &MinkCotangentPoint<T>,
    params: &MinkParams<T>,
) -> ((T, T), (T, T)) {
    let h = params.epsilon * lit(0.5);
    let am = (h * c.pminus * c.qminus).exp();
    let ap = (h * c.pplus * c.qplus).exp();
    ((c.qplus * am, c.qminus / ap), (c.qplus / am, c.qminus * ap))
}

/// `P± = sinh((ε/2)p±q±)/((ε/2)q±)`, `Π± = p±q±`, `J = (P₊, P₋, Π₊ − Π₋)`.
pub fn mink_qp_moment<T: Real>(c: &MinkCotangentPoint<T>, params: &MinkParams<T>) -> MinkQpMoment<T> {
    let h = params.epsilon * lit(0.5);
    let piplus = c.pplus * c.qplus;
    let piminus = c.pminus * c.qminus;
    MinkQpMoment {
        pplus: c.pplus * real::shc(h * piplus),
        pminus: c.pminus * real::shc(h * piminus),
        s: piplus - piminus,
        piplus,
        piminus,
    }
}

/// World line `q⁺ = eᵃ sinh((ε/2)τ)/((ε/2)m)`, `q⁻ = e⁻ᵃ sinh((ε/2)(τ − b))/((ε/2)m)`.
pub fn mink_qp_worldline<T: Real>(a: T, b: T, params: &MinkParams<T>, tau: T) -> (T, T) {
    let h = params.epsilon * lit(0.5);
    let m = params.m;
    (
        a.exp() * tau * real::shc(h * tau) / m,
        (-a).exp() * (tau - b) * real::shc(h * (tau - b)) / m,
    )
}

/// Full cotangent state on the world line: `Π₊ = τ`, `Π₋ = τ − b`, `P₊ = m e⁻ᵃ`, `P₋ = m eᵃ`.
///
/// The parameter advances as `τ = m²t` under the Hamiltonian flow.
pub fn mink_qp_worldline_state<T: Real>(
    a: T,
    b: T,
    params: &MinkParams<T>,
    tau: T,
) -> MinkCotangentPoint<T> {
    let h = params.epsilon * lit(0.5);
    let (qplus, qminus) = mink_qp_worldline(a, b, params, tau);
    let pplus = params.m * (-a).exp() / real::shc(h * tau);
    let pminus = params.m * a.exp() / real::shc(h * (tau - b));
    MinkCotangentPoint::new(qplus, qminus, pplus, pminus)
}

/// Closed-form flow of `H = P₊P₋` in the commuting picture.
///
/// `P±` are conserved and `Π±` grow at rate `P₊P₋`; positions integrate `q̇± = P∓ cosh((ε/2)Π±)`.
pub fn mink_qp_exact_flow<T: Real>(
    c0: &MinkCotangentPoint<T>,
    params: &MinkParams<T>,
    t: T,
) -> MinkCotangentPoint<T> {
    let h = params.epsilon * lit(0.5);
    let mom = mink_qp_moment(c0, params);
    let mu2 = mom.pplus * mom.pminus;
    let half_shift = h * mu2 * t * lit(0.5);
    let drift = t * real::shc(half_shift);
    let piplus = mom.piplus + mu2 * t;
    let piminus = mom.piminus + mu2 * t;
    MinkCotangentPoint {
        qplus: c0.qplus + mom.pminus * drift * (h * mom.piplus + half_shift).cosh(),
        qminus: c0.qminus + mom.pplus * drift * (h * mom.piminus + half_shift).cosh(),
        pplus: mom.pplus / real::shc(h * piplus),
        pminus: mom.pminus / real::shc(h * piminus),
    }
}

/// Phase point with the same groupoid projections as the cotangent point.
///
/// `x` is the left projection; `η` is solved from the right projection, giving
/// `1 + εη₋x⁻ = e^{εΠ₋}` and `1 − εη₊x⁺ = e^{−εΠ₊}`. The image is always admissible.
pub fn mink_convert<T: Real>(c: &MinkCotangentPoint<T>, params: &MinkParams<T>) -> MinkPhasePoint<T> {
    let e = params.epsilon;
    let h = e * lit(0.5);
    let ((xplus, xminus), _) = mink_qp_projections(c, params);
    let piplus = c.pplus * c.qplus;
    let piminus = c.pminus * c.qminus;
    MinkPhasePoint {
        xplus,
        xminus,
        etaplus: c.pplus * (-h * piminus).exp() * real::expm1c(-e * piplus),
        etaminus: c.pminus * (h * piplus).exp() * real::expm1c(e * piminus),
    }
}

/// Inverse of [`mink_convert`] in closed form.
pub fn mink_invert<T: Real>(p: &MinkPhasePoint<T>, params: &MinkParams<T>) -> Result<MinkCotangentPoint<T>> {
    let e = params.epsilon;
    let h = e * lit(0.5);
    require_admissible(p, e)?;
    let a = p.etaminus * p.xminus;
    let b = p.etaplus * p.xplus;
    // Π₋ = log(1 + εη₋x⁻)/ε, Π₊ = −log(1 − εη₊x⁺)/ε
    let lm = real::ln1pc(e * a);
    let lp = real::ln1pc(-e * b);
    let piminus = a * lm;
    let piplus = b * lp;
    Ok(MinkCotangentPoint {
        qplus: p.xplus * (-h * piminus).exp(),
        qminus: p.xminus * (h * piplus).exp(),
        pplus: p.etaplus * lp * (h * piminus).exp(),
        pminus: p.etaminus * lm * (-h * piplus).exp(),
    })
}

/// Inverse of [`mink_convert`] by damped Newton iteration seeded at `(q, p) = (x, η)`.
pub fn mink_invert_newton<T: Real>(
    p: &MinkPhasePoint<T>,
    params: &MinkParams<T>,
    tol: T,
) -> Result<MinkCotangentPoint<T>> {
    require_admissible(p, params.epsilon)?;
    let target = p.to_array();
    let f = |v: &[T]| {
        let img = mink_convert(&MinkCotangentPoint::from_slice(v), params).to_array();
        Ok((0..4).map(|i| img[i] - target[i]).collect())
    };
    let sol = newton::solve(f, target.to_vec(), tol, newton::MAX_ITERATIONS)?;
    Ok(MinkCotangentPoint::from_slice(&sol))
}

/// `(x, η)` model with Hamiltonian `η₊η₋`, exact flow and Casimir monitor.
pub fn mink_model<T: Real>(params: MinkParams<T>) -> PoissonModel<T> {
    let e = params.epsilon;
    PoissonModel::new(
        "minkowski",
        4,
        move |x: &[T]| mink_brackets(&MinkPhasePoint::from_slice(x), &params),
        |x: &[T]| x[2] * x[3],
        |x: &[T]| vec![T::zero(), T::zero(), x[3], x[2]],
    )
    .with_exact_flow(move |x: &[T], t: T| {
        mink_exact_trajectory(&MinkPhasePoint::from_slice(x), &params, t).to_array().to_vec()
    })
    .with_admissible(move |x: &[T]| MinkPhasePoint::from_slice(x).is_admissible(e))
    .with_monitor(Monitor::new("casimir", |x: &[T]| x[2] * x[3]))
}

/// Commuting-coordinate model on `(q⁺, q⁻, p₊, p₋)` with `H = P₊P₋`.
pub fn mink_qp_model<T: Real>(params: MinkParams<T>) -> PoissonModel<T> {
    let h = params.epsilon * lit(0.5);
    PoissonModel::new(
        "minkowski-qp",
        4,
        |_x: &[T]| {
            let mut b = BracketMatrix::zeros(4);
            b.set_pair(2, 0, T::one());
            b.set_pair(3, 1, T::one());
            b
        },
        move |x: &[T]| {
            let m = mink_qp_moment(&MinkCotangentPoint::from_slice(x), &params);
            m.pplus * m.pminus
        },
        move |x: &[T]| {
            let c = MinkCotangentPoint::from_slice(x);
            let m = mink_qp_moment(&c, &params);
            let (zp, zm) = (h * m.piplus, h * m.piminus);
            // ∂_q P = (ε/2) p² shc'(z), ∂_p P = cosh z
            vec![
                m.pminus * h * c.pplus * c.pplus * real::shc_prime(zp),
                m.pplus * h * c.pminus * c.pminus * real::shc_prime(zm),
                m.pminus * zp.cosh(),
                m.pplus * zm.cosh(),
            ]
        },
    )
    .with_exact_flow(move |x: &[T], t: T| {
        mink_qp_exact_flow(&MinkCotangentPoint::from_slice(x), &params, t).to_array().to_vec()
    })
    .with_monitor(Monitor::new("casimir", move |x: &[T]| {
        let m = mink_qp_moment(&MinkCotangentPoint::from_slice(x), &params);
        m.pplus * m.pminus
    }))
}

/// `asinh`-based recovery of `Π₊` from `(q⁺, P₊)`: `Π₊ = q⁺P₊ · asinhc((ε/2)P₊q⁺)`.
pub fn mink_action_from_moment<T: Real>(q: T, big_p: T, epsilon: T) -> T {
    let u = epsilon * lit(0.5) * big_p * q;
    q * big_p * asinhc(u)
}
