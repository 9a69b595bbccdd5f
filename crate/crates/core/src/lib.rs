//! Lower bounds for the constants of the real Hardy-Littlewood inequality
//! for m-homogeneous polynomials on l_p^2.
//!
//! The pipeline: build a bivariate form from one of the small parametrized
//! families, take its coefficient q-norm at the optimal exponent q(m, p) and
//! its sup-norm on the l_p unit sphere, and certify the quotient of the two
//! as a lower bound for the constant at (m, p). Powers of the same forms
//! carry the certificates to degree 600, where the per-degree roots become
//! hypercontractive growth estimates.
//!
//! Everything is deterministic for a fixed [`OptConfig`]: the sphere search
//! scans a fixed grid, the parameter search seeds all of its randomness from
//! the config, and results do not depend on the worker-thread count.

pub mod bounds;
pub mod brent;
pub mod error;
pub mod exact;
pub mod kahan;
pub mod norm;
pub mod optimize;
pub mod poly;
pub mod props;
pub mod simplex;

pub use bounds::{
    hl_exponent, hyper_estimate, lower_bound, lower_bound_family, BoundReport, HyperReport,
};
pub use error::{Error, Result};
pub use exact::ExactPoly;
pub use norm::{sphere_point, sup_norm, sup_norm_oracle, NormResult, OptConfig};
pub use optimize::{optimize_parameters, parameter_sweep, OptimizeMode, OptimizeOutcome};
pub use poly::{FamilyId, HomoPoly2, ALL_FAMILIES, DEFAULT_DEGREE_CAP};
