//! 2×2 complex linear algebra for the Manin group SL(2,ℂ).
//!
//! SL(2,ℂ) is factorized as a product of a compact or Euclidean part `G` (SU(2), or the
//! lower-triangular realization of E(2)) with the upper-triangular dual group `G*`
//! (positive real diagonal). These factorizations realize the phase spaces of the models
//! and the dressing action of `G` on `G*`.

mod factor;
mod mat2;
mod su2;

pub use factor::{
    dress_e2, dress_su2, dressing, factor_borel_e2, factor_borel_su2, factor_e2_borel,
    factor_su2_borel, manin_pairing, BorelElement, E2Element, Split, Triple, DECOMPOSABLE_TOL,
    NEAR_SINGULAR_TOL,
};
pub use mat2::Mat2C;
pub use su2::{su2_exp, su2_metric, SU2Element, Su2Vector};

/// Tolerance on group membership tests (unitarity, unit determinant).
pub const TOL_GROUP: f64 = 1e-12;
/// Tolerance on recomposition of factorized products.
pub const TOL_RECOMPOSE: f64 = 1e-12;
