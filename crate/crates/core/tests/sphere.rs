use num_complex::Complex;
use poisson_motion::matrix::{su2_exp, SU2Element, Su2Vector};
use poisson_motion::sphere::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

fn random_su2(rng: &mut ChaCha8Rng) -> SU2Element<f64> {
    let v = Su2Vector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    su2_exp(v)
}

#[test]
fn measured_circles_match_the_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let params = SphereParams::new(rng.gen_range(0.05..1.0));
        let w = C::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let g0 = random_su2(&mut rng);
        let b = DualSphereElement::new(0.0, w);
        let analytic = sphere_circle_geometry(&b, &params).transported(&g0);
        let (pts, dt) = sphere_projected_samples(&SpherePhasePoint::new(g0, b), &params, 64);
        let m = classify_projected_circle(&pts, dt).unwrap();
        assert_eq!(m.kind, CircleKind::SmallCircle);
        assert_eq!(analytic.kind, CircleKind::SmallCircle);
        let dot: f64 = (0..3).map(|i| m.axis[i] * analytic.axis[i]).sum();
        assert!(dot.abs() >= 1.0 - 1e-8);
        let e = params.epsilon;
        let law = e * w.norm() / (1.0 + e * e * w.norm_sqr()).sqrt();
        assert!((m.cos_polar - law).abs() <= 1e-8);
        assert!(m.fit_residual <= 1e-8);
        assert!((m.angular_speed - analytic.angular_speed).abs() <= 1e-8 * analytic.angular_speed);
    }
}

#[test]
fn resting_particle_projects_to_a_point() {
    let params = SphereParams::new(0.5);
    let p0 = SpherePhasePoint::new(su2_exp(Su2Vector::new(0.3, 0.2, -0.1)), DualSphereElement::default());
    let (pts, dt) = sphere_projected_samples(&p0, &params, 32);
    assert_eq!(classify_projected_circle(&pts, dt).unwrap().kind, CircleKind::Point);
}

#[test]
fn big_circles_cover_every_polar_angle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bins = [0usize; 20];
    for _ in 0..2000 {
        let g0 = random_su2(&mut rng);
        let x = Su2Vector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (pts, dt) = big_circle_samples(&g0, x, 64);
        let r = classify_projected_circle(&pts, dt).unwrap();
        if r.kind != CircleKind::Point {
            bins[((r.cos_polar * 20.0) as usize).min(19)] += 1;
        }
        // Measured geometry agrees with the projected big circle's closed form.
        let a = big_circle_geometry(&g0, x);
        assert!((a.cos_polar - r.cos_polar).abs() < 1e-8);
    }
    assert!(bins.iter().all(|&n| n > 0), "{bins:?}");
}

#[test]
fn perpendicularity_matches_classifier() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..200 {
        let mut x = Su2Vector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if k % 2 == 0 {
            x.k3 = 0.0;
        }
        let (pts, dt) = big_circle_samples(&random_su2(&mut rng), x, 64);
        let r = classify_projected_circle(&pts, dt).unwrap();
        if r.kind == CircleKind::Point {
            continue;
        }
        assert_eq!(perpendicularity_criterion(x), r.kind == CircleKind::GreatCircle);
    }
}

#[test]
fn classical_limit() {
    let params = SphereParams::new(1e-6);
    for w in [C::new(2.0, 0.0), C::new(0.3, -1.1), C::new(-1.0, 1.0)] {
        let b = DualSphereElement::new(0.0, w);
        let (_, ht) = sphere_deformed_hamiltonian(&b.to_borel(1e-6).matrix(), &params).unwrap();
        assert!((ht - 0.5 * w.norm_sqr()).abs() <= 1e-8);
        let g0 = su2_exp(Su2Vector::new(0.4, -0.2, 0.9));
        let p = sphere_phase_trajectory(&SpherePhasePoint::new(g0, b), &params, 1.3);
        let (_, ht) = sphere_deformed_hamiltonian(&p.xi(&params), &params).unwrap();
        assert!((ht - 0.5 * w.norm_sqr()).abs() <= 1e-8);
        assert!(sphere_circle_geometry(&b, &params).cos_polar <= 2e-6);
    }
}
