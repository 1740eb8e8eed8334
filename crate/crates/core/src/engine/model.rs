use std::fmt;
use std::sync::Arc;

use crate::scalar::Real;

/// Dense `n×n` real matrix holding a Poisson bivector `πᵢⱼ = {xᵢ, xⱼ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> BracketMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Sets `{xᵢ, xⱼ} = v` and `{xⱼ, xᵢ} = −v`.
    pub fn set_pair(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = -v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    /// Largest `|πᵢⱼ + πⱼᵢ|`.
    pub fn antisymmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.get(i, j) + self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `(∇H)ᵀ π`, i.e. component `i` is `Σⱼ ∂ⱼH πⱼᵢ = {H, xᵢ}`.
    pub fn flow_of(&self, grad: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| (0..self.n).fold(T::zero(), |acc, j| acc + grad[j] * self.get(j, i)))
            .collect()
    }
}

type StateFn<T, R> = Arc<dyn Fn(&[T]) -> R + Send + Sync>;
type FlowFn<T> = Arc<dyn Fn(&[T], T) -> Vec<T> + Send + Sync>;

/// Named function of the state expected to stay constant along the flow.
#[derive(Clone)]
pub struct Monitor<T> {
    pub name: String,
    f: StateFn<T, T>,
}

impl<T: Real> Monitor<T> {
    pub fn new(name: impl Into<String>, f: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Arc::new(f) }
    }

    pub fn eval(&self, state: &[T]) -> T {
        (self.f)(state)
    }
}

impl<T> fmt::Debug for Monitor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Monitor").field("name", &self.name).finish()
    }
}

/// Anything the integrator can advance.
pub trait Dynamics<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn rhs(&self, state: &[T]) -> Vec<T>;

    /// Whether the state is inside the phase space.
    fn admissible(&self, _state: &[T]) -> bool {
        true
    }

    fn monitors(&self) -> &[Monitor<T>] {
        &[]
    }

    /// Closed-form solution started at `state`, if the model has one.
    fn exact_flow(&self, _state: &[T], _t: T) -> Option<Vec<T>> {
        None
    }
}

/// Bracket table plus Hamiltonian.
#[derive(Clone)]
pub struct PoissonModel<T> {
    pub name: String,
    pub dimension: usize,
    bracket_table: StateFn<T, BracketMatrix<T>>,
    hamiltonian: StateFn<T, T>,
    hamiltonian_gradient: StateFn<T, Vec<T>>,
    exact: Option<FlowFn<T>>,
    admissible: Option<StateFn<T, bool>>,
    pub monitors: Vec<Monitor<T>>,
}

impl<T: Real> PoissonModel<T> {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        bracket_table: impl Fn(&[T]) -> BracketMatrix<T> + Send + Sync + 'static,
        hamiltonian: impl Fn(&[T]) -> T + Send + Sync + 'static,
        hamiltonian_gradient: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dimension,
            bracket_table: Arc::new(bracket_table),
            hamiltonian: Arc::new(hamiltonian),
            hamiltonian_gradient: Arc::new(hamiltonian_gradient),
            exact: None,
            admissible: None,
            monitors: Vec::new(),
        }
    }

    pub fn with_exact_flow(mut self, f: impl Fn(&[T], T) -> Vec<T> + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(f));
        self
    }

    pub fn with_admissible(mut self, f: impl Fn(&[T]) -> bool + Send + Sync + 'static) -> Self {
        self.admissible = Some(Arc::new(f));
        self
    }

    pub fn with_monitor(mut self, m: Monitor<T>) -> Self {
        self.monitors.push(m);
        self
    }

    /// Replaces the bracket table by `f(original table, state)`. Used for negative controls.
    pub fn map_brackets(
        mut self,
        f: impl Fn(BracketMatrix<T>, &[T]) -> BracketMatrix<T> + Send + Sync + 'static,
    ) -> Self {
        let inner = self.bracket_table.clone();
        self.bracket_table = Arc::new(move |x: &[T]| f(inner(x), x));
        self
    }

    pub fn brackets(&self, state: &[T]) -> BracketMatrix<T> {
        (self.bracket_table)(state)
    }

    pub fn hamiltonian(&self, state: &[T]) -> T {
        (self.hamiltonian)(state)
    }

    pub fn gradient(&self, state: &[T]) -> Vec<T> {
        (self.hamiltonian_gradient)(state)
    }

    pub fn has_exact_flow(&self) -> bool {
        self.exact.is_some()
    }

    /// Canonical harmonic oscillator on `(q, p)` with `{p, q} = 1` and `H = ½(q² + p²)`.
    pub fn harmonic_oscillator() -> Self {
        let half = T::one() / (T::one() + T::one());
        Self::new(
            "harmonic",
            2,
            |_x: &[T]| {
                let mut b = BracketMatrix::zeros(2);
                b.set_pair(1, 0, T::one());
                b
            },
            move |x: &[T]| half * (x[0] * x[0] + x[1] * x[1]),
            |x: &[T]| vec![x[0], x[1]],
        )
        .with_exact_flow(|x: &[T], t: T| {
            let (s, c) = t.sin_cos();
            vec![x[0] * c + x[1] * s, x[1] * c - x[0] * s]
        })
        .with_monitor(Monitor::new("energy", move |x: &[T]| half * (x[0] * x[0] + x[1] * x[1])))
    }
}

impl<T> fmt::Debug for PoissonModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PoissonModel")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("monitors", &self.monitors)
            .finish_non_exhaustive()
    }
}

/// `ẋᵢ = {H, xᵢ}` from the bracket table and the Hamiltonian gradient.
pub fn hamiltonian_rhs<T: Real>(model: &PoissonModel<T>, point: &[T]) -> Vec<T> {
    model.brackets(point).flow_of(&model.gradient(point))
}

impl<T: Real> Dynamics<T> for PoissonModel<T> {
    fn dim(&self) -> usize {
        self.dimension
    }

    fn rhs(&self, state: &[T]) -> Vec<T> {
        hamiltonian_rhs(self, state)
    }

    fn admissible(&self, state: &[T]) -> bool {
        self.admissible.as_ref().is_none_or(|f| f(state))
    }

    fn monitors(&self) -> &[Monitor<T>] {
        &self.monitors
    }

    fn exact_flow(&self, state: &[T], t: T) -> Option<Vec<T>> {
        self.exact.as_ref().map(|f| f(state, t))
    }
}
