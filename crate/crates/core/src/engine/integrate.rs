use super::model::Dynamics;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub dt: T,
    pub t_end: T,
    pub adaptive_tol: T,
    pub max_steps: usize,
}

impl<T: Real> IntegratorConfig<T> {
    pub fn new(dt: T, t_end: T) -> Self {
        Self { dt, t_end, adaptive_tol: lit(1e-12), max_steps: 10_000_000 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= T::zero() {
            return Err(Error::InvalidParameter("dt must be positive".into()));
        }
        if !self.t_end.is_finite() || self.t_end < T::zero() {
            return Err(Error::InvalidParameter("t_end must be finite and non-negative".into()));
        }
        if self.adaptive_tol.is_nan() || self.adaptive_tol <= T::zero() {
            return Err(Error::InvalidParameter("adaptive_tol must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of uniform steps covering `[0, t_end]` with step at most `dt`.
    pub fn uniform_steps(&self) -> usize {
        let ratio = self.t_end / self.dt;
        let n = (ratio - lit(1e-9)).ceil();
        n.to_usize().unwrap_or(usize::MAX).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Adaptive,
    Exact,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::Adaptive => "adaptive",
            Method::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status<T> {
    Completed,
    /// The next step would have left the phase space at time `t`; the trajectory ends at the
    /// last admissible state.
    DomainExit { t: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSeries<T> {
    pub name: String,
    pub values: Vec<T>,
}

impl<T: Real> MonitorSeries<T> {
    /// Largest deviation from the initial value.
    pub fn drift(&self) -> T {
        let first = self.values.first().copied().unwrap_or(T::zero());
        self.values.iter().fold(T::zero(), |m, v| m.max((*v - first).abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub monitor_values: Vec<MonitorSeries<T>>,
    pub method: Method,
    pub status: Status<T>,
}

impl<T: Real> Trajectory<T> {
    fn start<D: Dynamics<T> + ?Sized>(model: &D, x0: &[T], method: Method) -> Self {
        let mut tr = Self {
            times: Vec::new(),
            states: Vec::new(),
            monitor_values: model
                .monitors()
                .iter()
                .map(|m| MonitorSeries { name: m.name.clone(), values: Vec::new() })
                .collect(),
            method,
            status: Status::Completed,
        };
        tr.push(model, T::zero(), x0.to_vec());
        tr
    }

    fn push<D: Dynamics<T> + ?Sized>(&mut self, model: &D, t: T, x: Vec<T>) {
        for (series, m) in self.monitor_values.iter_mut().zip(model.monitors()) {
            series.values.push(m.eval(&x));
        }
        self.times.push(t);
        self.states.push(x);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &[T] {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn monitor(&self, name: &str) -> Option<&MonitorSeries<T>> {
        self.monitor_values.iter().find(|m| m.name == name)
    }
}

fn axpy<T: Real>(x: &[T], a: T, k: &[T]) -> Vec<T> {
    x.iter().zip(k).map(|(xi, ki)| *xi + a * *ki).collect()
}

/// One classic fourth-order Runge–Kutta step.
pub fn rk4_step<T: Real, D: Dynamics<T> + ?Sized>(model: &D, x: &[T], h: T) -> Vec<T> {
    let half = h * lit(0.5);
    let k1 = model.rhs(x);
    let k2 = model.rhs(&axpy(x, half, &k1));
    let k3 = model.rhs(&axpy(x, half, &k2));
    let k4 = model.rhs(&axpy(x, h, &k3));
    let sixth = h / lit(6.0);
    let two: T = lit(2.0);
    (0..x.len())
        .map(|i| x[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect()
}

fn max_abs_diff<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
}

/// Integrates `model` from `x0` over `[0, config.t_end]`.
///
/// `Rk4` and `Exact` sample the uniform grid `tₖ = k·t_end/n` with `n` the smallest step
/// count for which the step does not exceed `dt`. `Adaptive` uses step doubling on RK4 and
/// keeps every accepted step.
pub fn integrate<T: Real, D: Dynamics<T> + ?Sized>(
    model: &D,
    x0: &[T],
    config: &IntegratorConfig<T>,
    method: Method,
) -> Result<Trajectory<T>> {
    config.validate()?;
    if x0.len() != model.dim() {
        return Err(Error::InvalidInput(format!(
            "state has {} components, model expects {}",
            x0.len(),
            model.dim()
        )));
    }
    if !model.admissible(x0) {
        return Err(Error::OutsidePhaseSpace("initial state not admissible".into()));
    }
    let mut tr = Trajectory::start(model, x0, method);
    if config.t_end == T::zero() {
        return Ok(tr);
    }
    match method {
        Method::Rk4 | Method::Exact => {
            let n = config.uniform_steps();
            if n > config.max_steps {
                return Err(Error::MaxStepsExceeded(config.max_steps));
            }
            let h = config.t_end / lit(n as f64);
            let mut x = x0.to_vec();
            for k in 1..=n {
                let t = if k == n { config.t_end } else { h * lit(k as f64) };
                let next = if method == Method::Exact {
                    model
                        .exact_flow(x0, t)
                        .ok_or_else(|| Error::Unsupported("model has no exact flow".into()))?
                } else {
                    rk4_step(model, &x, h)
                };
                if !model.admissible(&next) || next.iter().any(|v| !v.is_finite()) {
                    tr.status = Status::DomainExit { t };
                    break;
                }
                tr.push(model, t, next.clone());
                x = next;
            }
        }
        Method::Adaptive => {
            let safety: T = lit(0.9);
            let (shrink, grow): (T, T) = (lit(0.2), lit(5.0));
            let min_h = config.t_end * T::epsilon() * lit(16.0);
            let mut h = config.dt.min(config.t_end);
            let mut t = T::zero();
            let mut x = x0.to_vec();
            let mut attempts = 0usize;
            while t < config.t_end {
                attempts += 1;
                if attempts > config.max_steps {
                    return Err(Error::MaxStepsExceeded(config.max_steps));
                }
                let last = t + h >= config.t_end;
                if last {
                    h = config.t_end - t;
                }
                let full = rk4_step(model, &x, h);
                let mid = rk4_step(model, &x, h * lit(0.5));
                let fine = rk4_step(model, &mid, h * lit(0.5));
                let err = max_abs_diff(&full, &fine) / lit(15.0);
                let admissible = model.admissible(&fine) && fine.iter().all(|v| v.is_finite());
                if err <= config.adaptive_tol || h <= min_h {
                    if !admissible {
                        tr.status = Status::DomainExit { t: t + h };
                        break;
                    }
                    t = if last { config.t_end } else { t + h };
                    tr.push(model, t, fine.clone());
                    x = fine;
                }
                let factor = if err > T::zero() {
                    safety * (config.adaptive_tol / err).powf(lit(0.2))
                } else {
                    grow
                };
                h = h * factor.max(shrink).min(grow);
            }
        }
    }
    Ok(tr)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport<T> {
    pub max_deviation: T,
    pub monitor_drift: Vec<(String, T)>,
    pub samples: usize,
    pub status: Status<T>,
}

/// Integrates with `method` and measures the largest state deviation from the exact flow on
/// the same time grid, plus the drift of each monitor.
pub fn compare_exact<T: Real, D: Dynamics<T> + ?Sized>(
    model: &D,
    x0: &[T],
    config: &IntegratorConfig<T>,
    method: Method,
) -> Result<(CompareReport<T>, Trajectory<T>)> {
    if model.exact_flow(x0, T::zero()).is_none() {
        return Err(Error::Unsupported("model has no exact flow".into()));
    }
    let tr = integrate(model, x0, config, method)?;
    let mut max_deviation = T::zero();
    for (t, x) in tr.times.iter().zip(&tr.states) {
        let exact = model.exact_flow(x0, *t).expect("exact flow checked above");
        max_deviation = max_deviation.max(max_abs_diff(x, &exact));
    }
    let report = CompareReport {
        max_deviation,
        monitor_drift: tr.monitor_values.iter().map(|m| (m.name.clone(), m.drift())).collect(),
        samples: tr.len(),
        status: tr.status,
    };
    Ok((report, tr))
}
