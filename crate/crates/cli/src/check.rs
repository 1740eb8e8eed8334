//! `check`: invariant suites over seeded random samples.

use num_complex::Complex;
use poisson_motion::engine::{jacobi_residual, JACOBI_FD_STEP};
use poisson_motion::matrix::{
    factor_borel_e2, factor_borel_su2, factor_e2_borel, factor_su2_borel, su2_exp, Mat2C, Su2Vector,
};
use poisson_motion::minkowski::*;
use poisson_motion::plane::*;
use poisson_motion::sphere::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::Suite;

type C = Complex<f64>;

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub cases: Vec<Case>,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Factorization => "factorization",
            Suite::Jacobi => "jacobi",
            Suite::Casimir => "casimir",
            Suite::Groupoid => "groupoid",
            Suite::CircleGeometry => "circle-geometry",
            Suite::Identities => "identities",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Suite::Jacobi | Suite::CircleGeometry => 100,
            _ => 1000,
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Factorization | Suite::Groupoid => 1e-12,
            Suite::Jacobi => 1e-6,
            Suite::Casimir => 1e-13,
            Suite::CircleGeometry => 1e-8,
            Suite::Identities => 1e-10,
        }
    }
}

/// Running maximum of one named residual.
struct Acc {
    name: &'static str,
    max: f64,
    detail: String,
}

impl Acc {
    fn new(name: &'static str) -> Self {
        Self { name, max: 0.0, detail: String::new() }
    }

    fn push(&mut self, r: f64) {
        // NaN counts as a failure.
        self.max = if r.is_nan() { f64::INFINITY } else { self.max.max(r) };
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

pub fn run(suite: Suite, samples: usize, seed: u64, tolerance: f64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let accs = match suite {
        Suite::Factorization => factorization(&mut rng, samples),
        Suite::Jacobi => jacobi(&mut rng, samples),
        Suite::Casimir => casimir(&mut rng, samples),
        Suite::Groupoid => groupoid(&mut rng, samples),
        Suite::CircleGeometry => circle_geometry(&mut rng, samples),
        Suite::Identities => identities(&mut rng, samples),
    };
    let cases: Vec<Case> = accs
        .into_iter()
        .map(|a| Case { name: a.name.into(), residual: a.max, pass: a.max <= tolerance, detail: a.detail })
        .collect();
    let max_residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
    CheckReport {
        suite: suite.name().into(),
        seed,
        samples,
        tolerance,
        max_residual,
        pass: cases.iter().all(|c| c.pass),
        cases,
    }
}

fn cplx(rng: &mut ChaCha8Rng, r: f64) -> C {
    C::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// Random element of SL(2,ℂ): a random matrix scaled by a square root of its determinant.
pub fn random_sl2c(rng: &mut ChaCha8Rng) -> Mat2C<f64> {
    loop {
        let m = Mat2C::new(cplx(rng, 1.0), cplx(rng, 1.0), cplx(rng, 1.0), cplx(rng, 1.0));
        if m.det().norm() > 0.1 {
            return m.scale(m.det().sqrt().inv());
        }
    }
}

fn random_su2_vec(rng: &mut ChaCha8Rng, r: f64) -> Su2Vector<f64> {
    Su2Vector::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// Admissible plane point with `|1 − iεx̄η| ≥ 0.01`.
pub fn random_plane_point(rng: &mut ChaCha8Rng, e: f64) -> PlanePhasePoint<f64> {
    loop {
        let p = PlanePhasePoint::new(cplx(rng, 2.0), cplx(rng, 2.0));
        if p.denominator(e).norm() >= 0.01 {
            return p;
        }
    }
}

/// Admissible Minkowski point with both factors at least 0.01.
pub fn random_mink_point(rng: &mut ChaCha8Rng, e: f64) -> MinkPhasePoint<f64> {
    loop {
        let p = MinkPhasePoint::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let (a, b) = p.factors(e);
        if a >= 0.01 && b >= 0.01 {
            return p;
        }
    }
}

fn factorization(rng: &mut ChaCha8Rng, n: usize) -> Vec<Acc> {
    let mut su2b = Acc::new("su2_borel_recompose");
    let mut bsu2 = Acc::new("borel_su2_recompose");
    let mut e2b = Acc::new("e2_borel_recompose");
    let mut be2 = Acc::new("borel_e2_recompose");
    let mut boundary = Acc::new("e2_domain_boundary");
    let mut route = Acc::new("matrix_route_right_projection");
    let mut wrong = 0usize;
    for _ in 0..n {
        let m = random_sl2c(rng);
        let (k, b) = factor_su2_borel(&m).expect("SL(2,C) input");
        su2b.push((*k.matrix() * b.matrix()).dist(&m));
        let (b, k) = factor_borel_su2(&m).expect("SL(2,C) input");
        bsu2.push((b.matrix() * *k.matrix()).dist(&m));
        match factor_e2_borel(&m) {
            Ok(s) => e2b.push((s.left.matrix() * s.right.matrix()).dist(&m)),
            Err(_) => wrong += usize::from(m.a.norm() >= 1e-10),
        }
        match factor_borel_e2(&m) {
            Ok(s) => be2.push((s.left.matrix() * s.right.matrix()).dist(&m)),
            Err(_) => wrong += usize::from(m.d.norm() >= 1e-10),
        }
        // Pivot just below and just above the boundary.
        let z = C::new(0.0, 0.0);
        let bb = cplx(rng, 1.0) + C::new(1.5, 0.0);
        for (mag, should_succeed) in [(0.0, false), (5e-11, false), (2e-10, true)] {
            let a = C::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU));
            let c = -bb.inv();
            // det = −bc = 1 and d = 0: only the E(2)·dual split can exist.
            let edge = Mat2C::new(a, bb, c, z);
            wrong += usize::from(factor_e2_borel(&edge).is_ok() != should_succeed);
            wrong += usize::from(factor_borel_e2(&edge).is_ok());
        }
        let p = random_plane_point(rng, 1.0);
        let pr = PlaneParams::new(1.0);
        let (_, r) = plane_projections(&p, &pr).expect("admissible");
        let via = plane_right_projection_via_factorization(&p, &pr).expect("admissible");
        route.push((via - r).norm() / r.norm().max(1.0));
    }
    boundary.push(wrong as f64);
    vec![
        su2b,
        bsu2,
        e2b,
        be2,
        boundary.detail(format!("{wrong} wrong success/error outcomes at |pivot| ∈ {{0, 5e-11, 2e-10}}")),
        route,
    ]
}

fn jacobi(rng: &mut ChaCha8Rng, n: usize) -> Vec<Acc> {
    let plane = plane_model(PlaneParams::new(1.0));
    let mink = mink_model(MinkParams::new(1.0, 1.0));
    let broken = plane.clone().map_brackets(|mut b, _| {
        let v = b.get(2, 3);
        b.set_pair(2, 3, -v);
        b
    });
    let mut ap = Acc::new("plane_table");
    let mut am = Acc::new("minkowski_table");
    let mut missed = 0usize;
    let mut weakest = f64::INFINITY;
    for _ in 0..n {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        ap.push(jacobi_residual(&plane, &x, JACOBI_FD_STEP));
        am.push(jacobi_residual(&mink, &x, JACOBI_FD_STEP));
        let r = jacobi_residual(&broken, &x, JACOBI_FD_STEP);
        weakest = weakest.min(r);
        missed += usize::from(r <= 1e-2);
    }
    let mut neg = Acc::new("corrupted_table_detected");
    neg.push(missed as f64);
    vec![
        ap.detail(format!("fd step {JACOBI_FD_STEP:e}")),
        am.detail(format!("fd step {JACOBI_FD_STEP:e}")),
        neg.detail(format!(
            "sign of {{η¹,η²}} flipped; {missed} of {n} points below 1e-2, smallest residual {weakest:e}"
        )),
    ]
}

fn casimir(rng: &mut ChaCha8Rng, n: usize) -> Vec<Acc> {
    let mut ap = Acc::new("plane_abs_p_equals_abs_eta");
    let mut am = Acc::new("minkowski_pplus_pminus");
    for _ in 0..n {
        let e = rng.gen_range(0.01..1.0);
        let p = random_plane_point(rng, e);
        let m = plane_moment(&p, &PlaneParams::new(e)).expect("admissible");
        ap.push((m.p.norm() - p.eta.norm()).abs() / p.eta.norm().max(1.0));
        let q = random_mink_point(rng, e);
        let m = mink_moment(&q, &MinkParams::new(e, 1.0)).expect("admissible");
        am.push((m.pplus * m.pminus - q.casimir()).abs() / q.casimir().abs().max(1.0));
    }
    vec![ap.detail("relative to max(1, |η|)"), am.detail("relative to max(1, |η₊η₋|)")]
}

fn groupoid(rng: &mut ChaCha8Rng, n: usize) -> Vec<Acc> {
    let mut pproj = Acc::new("plane_projections_match_commuting_picture");
    let mut pmom = Acc::new("plane_moments_match_commuting_picture");
    let mut pinv = Acc::new("plane_invert_round_trip");
    let mut mproj = Acc::new("minkowski_projections_match_commuting_picture");
    let mut minv = Acc::new("minkowski_invert_round_trip");
    let mut units = Acc::new("units_have_equal_projections");
    for _ in 0..n {
        let e = rng.gen_range(0.01..1.0);
        let pr = PlaneParams::new(e);
        let c = PlaneCotangentPoint::new(cplx(rng, 1.0), cplx(rng, 1.0));
        let x = plane_convert(&c, &pr);
        let (xl, xr) = plane_projections(&x, &pr).expect("image of the conversion is admissible");
        let (ql, qr) = plane_qp_projections(&c, &pr);
        pproj.push((xl - ql).norm().max((xr - qr).norm()));
        let (mx, mq) = (plane_moment(&x, &pr).expect("admissible"), plane_effective_momentum(&c, &pr));
        pmom.push((mx.p - mq.p).norm().max((mx.s - mq.s).abs()));
        let back = plane_invert(&x, &pr).expect("admissible");
        pinv.push((back.q - c.q).norm().max((back.p - c.p).norm()));
        let rest = PlanePhasePoint::new(c.q, C::new(0.0, 0.0));
        let (l, r) = plane_projections(&rest, &pr).expect("admissible");
        units.push((l - r).norm());

        let mp = MinkParams::new(e, 1.0);
        let c = MinkCotangentPoint::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let x = mink_convert(&c, &mp);
        let (l, r) = (mink_left_projection(&x), mink_right_projection(&x, &mp).expect("admissible"));
        let (ql, qr) = mink_qp_projections(&c, &mp);
        mproj.push([l.0 - ql.0, l.1 - ql.1, r.0 - qr.0, r.1 - qr.1].iter().fold(0.0, |a: f64, v| a.max(v.abs())));
        let back = mink_invert(&x, &mp).expect("admissible");
        minv.push(back.to_array().iter().zip(c.to_array()).fold(0.0, |a: f64, (u, v)| a.max((u - v).abs())));
        let rest = MinkPhasePoint::new(c.qplus, c.qminus, 0.0, 0.0);
        let r = mink_right_projection(&rest, &mp).expect("admissible");
        units.push((r.0 - c.qplus).abs().max((r.1 - c.qminus).abs()));
    }
    vec![pproj, pmom, pinv, mproj, minv, units]
}

fn circle_geometry(rng: &mut ChaCha8Rng, n: usize) -> Vec<Acc> {
    let mut disagree = 0usize;
    let mut great = 0usize;
    let mut cos = Acc::new("cos_polar_matches_law");
    let mut axis = Acc::new("axis_alignment");
    let mut fit = Acc::new("fit_residual");
    let mut speed = Acc::new("angular_speed_relative");
    for _ in 0..n {
        let e = rng.gen_range(0.05..1.0);
        let w = C::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let params = SphereParams::new(e);
        let g0 = su2_exp(random_su2_vec(rng, 2.0));
        let b = DualSphereElement::new(0.0, w);
        let analytic = sphere_circle_geometry(&b, &params).transported(&g0);
        let (pts, dt) = sphere_projected_samples(&SpherePhasePoint::new(g0, b), &params, 64);
        let m = classify_projected_circle(&pts, dt).expect("64 samples");
        disagree += usize::from(m.kind != analytic.kind);
        great += usize::from(m.kind == CircleKind::GreatCircle);
        let law = e * w.norm() / (1.0 + e * e * w.norm_sqr()).sqrt();
        cos.push((m.cos_polar - law).abs());
        let dot: f64 = (0..3).map(|i| m.axis[i] * analytic.axis[i]).sum();
        axis.push(1.0 - dot.abs());
        fit.push(m.fit_residual);
        speed.push((m.angular_speed - analytic.angular_speed).abs() / analytic.angular_speed);
    }
    let (pts, dt) = sphere_projected_samples(
        &SpherePhasePoint::new(su2_exp(random_su2_vec(rng, 2.0)), DualSphereElement::default()),
        &SphereParams::new(0.5),
        64,
    );
    let rest_ok = classify_projected_circle(&pts, dt).map(|r| r.kind == CircleKind::Point).unwrap_or(false);
    let mut kinds = Acc::new("kind_agreement");
    kinds.push(disagree as f64);
    let mut no_great = Acc::new("no_great_circles");
    no_great.push(great as f64);
    let mut rest = Acc::new("rest_is_point");
    rest.push(if rest_ok { 0.0 } else { 1.0 });
    vec![
        kinds.detail(format!("{}/{n} agree", n - disagree)),
        no_great.detail(format!("{great} great circles reported")),
        rest,
        cos,
        axis.detail("1 − |axis·axis_analytic|"),
        fit,
        speed,
    ]
}

fn identities(rng: &mut ChaCha8Rng, n: usize) -> Vec<Acc> {
    let mut ham = Acc::new("plane_hamiltonian_identity");
    let mut pgm = Acc::new("plane_geometric_mean");
    let mut mgm = Acc::new("minkowski_geometric_mean");
    let mut ht = Acc::new("sphere_htilde_trace_vs_dual");
    for _ in 0..n {
        let e = rng.gen_range(0.01..1.0);
        let pr = PlaneParams::new(e);
        let mut p = random_plane_point(rng, e);
        while p.x.norm() < 0.05 {
            p = random_plane_point(rng, e);
        }
        let (l, r) = plane_projections(&p, &pr).expect("admissible");
        let h = plane_hamiltonian(p.eta);
        ham.push((plane_hamiltonian_identity(l, r, &pr).expect("x ≠ 0") - h).abs() / h.max(1.0));
        let c = PlaneCotangentPoint::new(cplx(rng, 2.0), cplx(rng, 2.0));
        let (l, r) = plane_qp_projections(&c, &pr);
        pgm.push((l * r - c.q * c.q).norm() / c.q.norm_sqr().max(1.0));
        let c = MinkCotangentPoint::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let ((lp, lm), (rp, rm)) = mink_qp_projections(&c, &MinkParams::new(e, 1.0));
        mgm.push(((lp * rp - c.qplus * c.qplus).abs() / (c.qplus * c.qplus).max(1.0)).max(
            (lm * rm - c.qminus * c.qminus).abs() / (c.qminus * c.qminus).max(1.0),
        ));
        let sp = SphereParams::new(e);
        let b = DualSphereElement::new(rng.gen_range(-1.0..1.0), cplx(rng, 2.0));
        let g = su2_exp(random_su2_vec(rng, 2.0));
        let (_, htilde) = sphere_deformed_hamiltonian(&SpherePhasePoint::new(g, b).xi(&sp), &sp).expect("det 1");
        let dual = sphere_dual_hamiltonian(&b, &sp);
        ht.push((htilde - dual).abs() / dual.max(1.0));
    }
    vec![
        ham.detail("relative to max(1, ½|η|²), |x| ≥ 0.05"),
        pgm.detail("ξ_L ξ_R − q²"),
        mgm.detail("x_L± x_R± − (q±)²"),
        ht.detail("(½ tr ξ†ξ − 1)/(4ε²) vs ½(sinh²(εs)/ε² + |w|²)"),
    ]
}
