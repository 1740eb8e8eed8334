//! `simulate`: one trajectory per method, plus a JSON report.

use std::path::{Path, PathBuf};

use num_complex::Complex;
use poisson_motion::engine::{compare_exact, integrate, Dynamics, IntegratorConfig, Method, Status, Trajectory};
use poisson_motion::matrix::{su2_exp, Su2Vector};
use poisson_motion::minkowski::{
    mink_hyperbola_center, mink_hyperbola_residual, mink_model, MinkParams, MinkPhasePoint,
};
use poisson_motion::plane::{plane_circle_params, plane_model, CircleMotion, PlaneParams, PlanePhasePoint};
use poisson_motion::sphere::{
    classify_projected_circle, hopf_project, sphere_circle_geometry, sphere_circle_period, CircleReport,
    DualSphereElement, SphereFlow, SphereParams, SpherePhasePoint, SpherePoint, MIN_CIRCLE_SAMPLES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Format, MethodArg, ModelKind, SimulateArgs, TEnd};
use crate::error::{CliError, CliResult};
use crate::output::{to_json, write_file, Table};

/// Steps per run when `--dt` is not given.
pub const DEFAULT_STEPS: f64 = 2000.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    Plane { x0: Complex<f64>, eta0: Complex<f64> },
    Minkowski { x0: (f64, f64), eta0: (f64, f64) },
    Sphere { g0: [f64; 3], s: f64, w: Complex<f64> },
}

/// Fully resolved simulation request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub model: ModelKind,
    pub epsilon: f64,
    pub initial: Initial,
    pub t_end: f64,
    pub dt: f64,
    pub method: MethodArg,
    pub seed: u64,
}

impl RunSpec {
    /// Fills in missing initial data from the seed and resolves `auto` horizons.
    pub fn resolve(args: &SimulateArgs, seed: u64) -> CliResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = args.epsilon;
        let initial = match args.model {
            ModelKind::Plane => {
                let x0 = args.x0.unwrap_or_else(|| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                let eta0 = args.eta0.unwrap_or_else(|| {
                    let c = Complex::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
                    (c.re, c.im)
                });
                Initial::Plane { x0: Complex::new(x0.0, x0.1), eta0: Complex::new(eta0.0, eta0.1) }
            }
            ModelKind::Minkowski => {
                let x0 = args.x0.unwrap_or_else(|| (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)));
                let eta0 = match (args.eta0, args.mass) {
                    (Some(eta), _) => eta,
                    (None, m) => {
                        let m = m.unwrap_or(1.0);
                        if m < 0.0 {
                            return Err(CliError::Usage("--mass must be non-negative".into()));
                        }
                        let a: f64 = rng.gen_range(-0.5..0.5);
                        (m * (-a).exp(), m * a.exp())
                    }
                };
                Initial::Minkowski { x0, eta0 }
            }
            ModelKind::Sphere => {
                let w = args.w.unwrap_or_else(|| {
                    let c = Complex::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
                    (c.re, c.im)
                });
                Initial::Sphere { g0: args.g0.unwrap_or([0.0; 3]), s: args.s.unwrap_or(0.0), w: Complex::new(w.0, w.1) }
            }
        };
        let t_end = match args.t_end {
            TEnd::Value(v) => v,
            TEnd::Auto => auto_t_end(e, &initial),
        };
        let dt = match args.dt {
            Some(dt) if dt > 0.0 => dt,
            Some(_) => return Err(CliError::Usage("--dt must be positive".into())),
            None if t_end > 0.0 => t_end / DEFAULT_STEPS,
            None => 1.0,
        };
        Ok(Self { model: args.model, epsilon: e, initial, t_end, dt, method: args.method, seed })
    }
}

/// One plane period, one sphere circle, or two e-folds of the Minkowski momenta.
pub fn auto_t_end(epsilon: f64, initial: &Initial) -> f64 {
    let fallback = |v: f64, d: f64| if v.is_finite() && v > 0.0 { v } else { d };
    match initial {
        Initial::Plane { x0, eta0 } => {
            match plane_circle_params(&PlanePhasePoint::new(*x0, *eta0), &PlaneParams::new(epsilon)) {
                Ok(CircleMotion::Circle { period, .. }) => fallback(period, 1.0),
                _ => 1.0,
            }
        }
        Initial::Minkowski { eta0, .. } => fallback(4.0 / (epsilon.abs() * (eta0.0 * eta0.1).abs()), 4.0),
        Initial::Sphere { s, w, .. } => {
            sphere_circle_period(&DualSphereElement::new(*s, *w), &SphereParams::new(epsilon)).map_or(1.0, |p| fallback(p, 1.0))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub method: String,
    pub samples: usize,
    pub t_final: f64,
    pub status: String,
    pub monitor_drift: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub method: String,
    pub max_deviation: f64,
    pub monitor_drift: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub model: String,
    pub epsilon: f64,
    pub seed: u64,
    pub method: String,
    pub t_end: f64,
    pub dt: f64,
    pub columns: Vec<String>,
    pub initial_state: Vec<f64>,
    pub runs: Vec<RunSummary>,
    pub comparison: Option<Comparison>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleJson {
    pub kind: String,
    pub axis: [f64; 3],
    pub cos_polar: f64,
    pub angular_speed: f64,
    pub fit_residual: f64,
}

impl From<CircleReport<f64>> for CircleJson {
    fn from(r: CircleReport<f64>) -> Self {
        Self {
            kind: r.kind.as_str().into(),
            axis: r.axis,
            cos_polar: r.cos_polar,
            angular_speed: r.angular_speed,
            fit_residual: r.fit_residual,
        }
    }
}

/// Closed-form circle (transported to the starting point) and the fit to the exact samples.
#[derive(Debug, Clone, Serialize)]
pub struct SphereCircle {
    #[serde(flatten)]
    pub analytic: CircleJson,
    pub measured: Option<CircleJson>,
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub tables: Vec<(Method, Table)>,
    pub report: SimReport,
    pub circle: Option<SphereCircle>,
    pub domain_exit: bool,
}

/// Model-specific pieces: dynamics, initial state and the row written per sample.
type RowFn = Box<dyn Fn(&[f64]) -> Vec<f64>>;

struct Setup {
    dynamics: Box<dyn Dynamics<f64>>,
    x0: Vec<f64>,
    columns: &'static [&'static str],
    row: RowFn,
}

fn setup(spec: &RunSpec) -> CliResult<Setup> {
    let e = spec.epsilon;
    Ok(match &spec.initial {
        Initial::Plane { x0, eta0 } => {
            let p = PlanePhasePoint::new(*x0, *eta0);
            if !p.is_admissible(e) {
                return Err(poisson_motion::Error::OutsidePhaseSpace("1 − iεx̄η vanishes at the initial point".into()).into());
            }
            let model = plane_model(PlaneParams::new(e));
            let monitors = model.monitors.clone();
            Setup {
                dynamics: Box::new(model),
                x0: p.to_array().to_vec(),
                columns: &["t", "x1", "x2", "eta1", "eta2", "H", "absP"],
                row: Box::new(move |x| {
                    let mut r = x.to_vec();
                    r.extend(monitors.iter().map(|m| m.eval(x)));
                    r
                }),
            }
        }
        Initial::Minkowski { x0, eta0 } => {
            let p = MinkPhasePoint::new(x0.0, x0.1, eta0.0, eta0.1);
            if !p.is_admissible(e) {
                return Err(poisson_motion::Error::OutsidePhaseSpace(
                    "1 + εη₋x⁻ and 1 − εη₊x⁺ must be positive at the initial point".into(),
                )
                .into());
            }
            Setup {
                dynamics: Box::new(mink_model(MinkParams::new(e, p.casimir().abs().sqrt()))),
                x0: p.to_array().to_vec(),
                columns: &["t", "xplus", "xminus", "etaplus", "etaminus", "casimir"],
                row: Box::new(|x| vec![x[0], x[1], x[2], x[3], x[2] * x[3]]),
            }
        }
        Initial::Sphere { g0, s, w } => {
            if e == 0.0 {
                return Err(CliError::Usage("the sphere model needs a nonzero --epsilon".into()));
            }
            let g = su2_exp(Su2Vector::from_array(*g0));
            let p = SpherePhasePoint::new(g, DualSphereElement::new(*s, *w));
            let flow = SphereFlow::new(SphereParams::new(e));
            let htilde = flow.monitors()[0].clone();
            Setup {
                dynamics: Box::new(flow),
                x0: p.to_state().to_vec(),
                columns: &["t", "n1", "n2", "n3", "Htilde"],
                row: Box::new(move |x| {
                    let n = hopf_project(&SpherePhasePoint::from_state(x).g);
                    vec![n.n1, n.n2, n.n3, htilde.eval(x)]
                }),
            }
        }
    })
}

fn table(setup: &Setup, tr: &Trajectory<f64>) -> Table {
    let mut t = Table::new(setup.columns);
    for (time, x) in tr.times.iter().zip(&tr.states) {
        let mut row = vec![*time];
        row.extend((setup.row)(x));
        t.rows.push(row);
    }
    t
}

fn summary(tr: &Trajectory<f64>) -> RunSummary {
    RunSummary {
        method: tr.method.name().into(),
        samples: tr.len(),
        t_final: tr.times.last().copied().unwrap_or(0.0),
        status: match tr.status {
            Status::Completed => "completed".into(),
            Status::DomainExit { t } => format!("domain exit at t = {t:e}"),
        },
        monitor_drift: tr.monitor_values.iter().map(|m| (m.name.clone(), m.drift())).collect(),
    }
}

pub fn run(spec: &RunSpec) -> CliResult<SimOutput> {
    let s = setup(spec)?;
    let cfg = IntegratorConfig::new(spec.dt, spec.t_end);
    let methods: &[Method] = match spec.method {
        MethodArg::Exact => &[Method::Exact],
        MethodArg::Rk4 => &[Method::Rk4],
        MethodArg::Adaptive => &[Method::Adaptive],
        MethodArg::Both => &[Method::Exact, Method::Rk4],
    };
    let mut trajectories = Vec::new();
    let mut comparison = None;
    for &m in methods {
        if spec.method == MethodArg::Both && m == Method::Rk4 {
            let (rep, tr) = compare_exact(s.dynamics.as_ref(), &s.x0, &cfg, m)?;
            comparison = Some(Comparison { method: m.name().into(), max_deviation: rep.max_deviation, monitor_drift: rep.monitor_drift });
            trajectories.push(tr);
        } else {
            trajectories.push(integrate(s.dynamics.as_ref(), &s.x0, &cfg, m)?);
        }
    }
    let domain_exit = trajectories.iter().any(|t| matches!(t.status, Status::DomainExit { .. }));
    let (checks, notes) = model_checks(spec, &trajectories);
    let circle = sphere_circle(spec, &trajectories);
    let report = SimReport {
        model: spec.model.name().into(),
        epsilon: spec.epsilon,
        seed: spec.seed,
        method: format!("{:?}", spec.method).to_lowercase(),
        t_end: spec.t_end,
        dt: spec.dt,
        columns: s.columns.iter().map(|c| c.to_string()).collect(),
        initial_state: s.x0.clone(),
        runs: trajectories.iter().map(summary).collect(),
        comparison,
        checks,
        notes,
    };
    let tables = trajectories.iter().map(|tr| (tr.method, table(&s, tr))).collect();
    Ok(SimOutput { tables, report, circle, domain_exit })
}

fn model_checks(spec: &RunSpec, trs: &[Trajectory<f64>]) -> (Vec<Check>, Vec<String>) {
    let e = spec.epsilon;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    match &spec.initial {
        Initial::Plane { x0, eta0 } => {
            match plane_circle_params(&PlanePhasePoint::new(*x0, *eta0), &PlaneParams::new(e)) {
                Ok(CircleMotion::Circle { center, radius, period }) => {
                    checks.push(Check { name: "circle_radius".into(), value: radius });
                    checks.push(Check { name: "circle_period".into(), value: period });
                    for tr in trs {
                        let dev = tr
                            .states
                            .iter()
                            .map(|x| ((Complex::new(x[0], x[1]) - center).norm() - radius).abs())
                            .fold(0.0, f64::max);
                        checks.push(Check { name: format!("max_radius_deviation_{}", tr.method.name()), value: dev });
                    }
                }
                Ok(CircleMotion::Point { .. }) => notes.push("zero momentum: the particle stays at rest".into()),
                Err(_) => notes.push("classical limit: ε = 0, the trajectory is a straight line".into()),
            }
        }
        Initial::Minkowski { x0, eta0 } => {
            let p = MinkPhasePoint::new(x0.0, x0.1, eta0.0, eta0.1);
            let m2 = p.casimir();
            if e == 0.0 {
                notes.push("classical limit: ε = 0, world lines are straight; hyperbola check skipped".into());
            } else if m2 <= 0.0 {
                notes.push("η₊η₋ ≤ 0: not on a positive mass shell; hyperbola check skipped".into());
            } else {
                let params = MinkParams::new(e, m2.sqrt());
                let center = mink_hyperbola_center(&p, &params).expect("εη₊η₋ ≠ 0");
                checks.push(Check { name: "hyperbola_center_plus".into(), value: center.0 });
                checks.push(Check { name: "hyperbola_center_minus".into(), value: center.1 });
                for tr in trs {
                    let res = tr
                        .states
                        .iter()
                        .map(|x| mink_hyperbola_residual(&MinkPhasePoint::from_slice(x), center, &params).abs())
                        .fold(0.0, f64::max);
                    checks.push(Check { name: format!("hyperbola_max_residual_{}", tr.method.name()), value: res });
                }
            }
        }
        Initial::Sphere { s, .. } => {
            if *s != 0.0 {
                notes.push("s ≠ 0: the momentum is off the constraint surface".into());
            }
        }
    }
    (checks, notes)
}

fn sphere_circle(spec: &RunSpec, trs: &[Trajectory<f64>]) -> Option<SphereCircle> {
    let Initial::Sphere { g0, s: sv, w } = &spec.initial else { return None };
    let g = su2_exp(Su2Vector::from_array(*g0));
    let params = SphereParams::new(spec.epsilon);
    let analytic = sphere_circle_geometry(&DualSphereElement::new(*sv, *w), &params).transported(&g);
    // Fit on the first uniform-grid run.
    let measured = trs.iter().find(|t| t.method != Method::Adaptive && t.len() >= MIN_CIRCLE_SAMPLES).and_then(|tr| {
        let pts: Vec<SpherePoint<f64>> =
            tr.states.iter().map(|x| hopf_project(&SpherePhasePoint::from_state(x).g)).collect();
        let dt = tr.times[1] - tr.times[0];
        classify_projected_circle(&pts, dt).ok().map(CircleJson::from)
    });
    Some(SphereCircle { analytic: analytic.into(), measured })
}

/// Writes the outputs of [`run`] into `dir` and returns the paths written.
pub fn write_outputs(out: &SimOutput, dir: &Path, format: Format) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for (method, table) in &out.tables {
        let (ext, body) = match format {
            Format::Csv => ("csv", table.to_csv()),
            Format::Json => ("json", table.to_json(&out.report.model, method.name())),
        };
        let path = dir.join(format!("trajectory_{}.{ext}", method.name()));
        write_file(&path, &body)?;
        written.push(path);
    }
    let path = dir.join("report.json");
    write_file(&path, &to_json(&out.report))?;
    written.push(path);
    if let Some(c) = &out.circle {
        let path = dir.join("circle.json");
        write_file(&path, &to_json(c))?;
        written.push(path);
    }
    Ok(written)
}
