//! Meridian surfaces of parabolic type in Minkowski 4-space: construction,
//! frames, closed-form invariants, a finite-difference oracle, and
//! generators for the classified families.

// `!(x <= tol)` deliberately treats NaN as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod expr;
pub mod families;
pub mod function;
pub mod grid;
pub mod invariants;
pub mod jet;
pub mod minkowski;
pub mod numeric;
pub mod ode;
pub mod profile;
pub mod surface;

pub use error::{Error, Result};
pub use expr::Expr;
pub use families::{constant_kappa_directrix, generate, integrate_autonomous, FamilySpec, GeneratedSurface};
pub use function::{jet_eval, Constant, ScalarFunction, SharedFn};
pub use grid::{Execution, ParamGrid};
pub use invariants::{
    eight_invariants, gauss_curvature, invariant_k, mean_curvature, normal_connection_curvature, oracle_invariants,
    oracle_second_fundamental, InvariantRecord,
};
pub use jet::Jet;
pub use minkowski::{gram, lightlike_basis, minkowski_dot, LightlikePair, Vec4};
pub use numeric::Interval;
pub use profile::{validate_profile, Directrix, ProfileCurve};
pub use surface::{MeridianSurface, NormalFrame, PointCase, TangentFrame};
