//! Generic Poisson-bracket dynamics.
//!
//! A [`PoissonModel`] is a bracket table `π(x)` and a Hamiltonian with analytic gradient.
//! The equations of motion are `ẋᵢ = {H, xᵢ} = Σⱼ ∂ⱼH πⱼᵢ` with `{f, g} = Σ ∂ⱼf πⱼₖ ∂ₖg`.
//! Complex coordinates are flattened to consecutive real pairs by the model modules.

mod integrate;
mod jacobi;
mod model;

pub use integrate::{
    compare_exact, integrate, rk4_step, CompareReport, IntegratorConfig, Method, MonitorSeries,
    Status, Trajectory,
};
pub use jacobi::{jacobi_residual, JACOBI_FD_STEP};
pub use model::{hamiltonian_rhs, BracketMatrix, Dynamics, Monitor, PoissonModel};
