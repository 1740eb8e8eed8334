//! Deformed free motion on three Poisson homogeneous spaces.
//!
//! * [`minkowski`]: two-dimensional Minkowski space-time in light-cone coordinates.
//! * [`plane`]: the Poisson plane, a homogeneous space of the Poisson group E(2).
//! * [`sphere`]: the Poisson sphere, a homogeneous space of the Poisson group SU(2).
//!
//! Each model exposes its symplectic-groupoid phase space (groupoid projections, moment map,
//! Poisson brackets), closed-form trajectories and a commuting-coordinate picture. The
//! [`engine`] integrates any bracket table numerically and is used as an independent check
//! on every closed form. [`matrix`] holds the 2×2 complex algebra behind the Manin group
//! SL(2,ℂ) and its factorizations.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`). The aliases at the crate root fix
//! the scalar to `f64`, which is what the tolerances quoted in the docs assume.

pub mod engine;
pub mod error;
pub mod matrix;
pub mod minkowski;
pub mod newton;
pub mod plane;
pub mod scalar;
pub mod sphere;

pub use error::{Error, Result};
pub use scalar::Real;

/// Complex scalar over `T`.
pub type Cplx<T> = num_complex::Complex<T>;

pub type C64 = num_complex::Complex<f64>;
pub type Mat2 = matrix::Mat2C<f64>;
pub type Su2 = matrix::SU2Element<f64>;
pub type E2 = matrix::E2Element<f64>;
pub type Borel = matrix::BorelElement<f64>;
pub type Su2Vec = matrix::Su2Vector<f64>;

pub type MinkParams = minkowski::MinkParams<f64>;
pub type MinkPoint = minkowski::MinkPhasePoint<f64>;
pub type MinkCotangent = minkowski::MinkCotangentPoint<f64>;

pub type PlaneParams = plane::PlaneParams<f64>;
pub type PlanePoint = plane::PlanePhasePoint<f64>;
pub type PlaneCotangent = plane::PlaneCotangentPoint<f64>;

pub type SphereParams = sphere::SphereParams<f64>;
pub type SpherePoint = sphere::SpherePoint<f64>;
pub type SpherePhase = sphere::SpherePhasePoint<f64>;
pub type DualSphere = sphere::DualSphereElement<f64>;
pub type CircleReport = sphere::CircleReport<f64>;

pub type PoissonModel = engine::PoissonModel<f64>;
pub type Trajectory = engine::Trajectory<f64>;
pub type IntegratorConfig = engine::IntegratorConfig<f64>;
