//! Exact-arithmetic engine for tautological integrals on jet-space GIT
//! quotients, and certification of the effective hyperbolicity degree
//! bounds they imply.
//!
//! The integral over the compactified jet quotient of a smooth degree-`d`
//! hypersurface reduces, by equivariant localisation, to an iterated residue:
//! the coefficient of `(zw)^{-1}` in a Laurent expansion on the contour
//! `z ≫ w` of a rational expression in the residue variables, the hyperplane
//! class `h`, the degree `d` and a twist parameter `δ`. This crate evaluates
//! that residue with exact rational arithmetic, extracts the integral as a
//! polynomial `p(d)` with δ-linear coefficients, and certifies `p(d) > 0`
//! beyond explicit degree thresholds, which is what the degree bounds rest
//! on. There is no floating point anywhere.
//!
//! Modules:
//! - [`rational`], [`coeffpoly`]: exact scalars and the `(d, δ)` coefficient
//!   ring;
//! - [`series`]: sparse truncated Laurent series with nilpotent `h`;
//! - [`residue`]: the iterated residue operator and the projective residue
//!   identity that pins its sign;
//! - [`classes`]: Chern/Segre data of a hypersurface and integration over it;
//! - [`pipeline`]: the master integrand, the degree polynomial, the estimate
//!   audit and bound certification;
//! - [`oracle`]: randomised and structural cross-checks.

pub mod classes;
pub mod coeffpoly;
pub mod error;
pub mod oracle;
pub mod pipeline;
pub mod rational;
pub mod residue;
pub mod series;

pub use classes::{hypersurface_segre, integrate_over_base, segre_substituted_factor, HypersurfaceClasses};
pub use coeffpoly::CoeffPoly;
pub use error::EngineError;
pub use oracle::{run_projective_oracle, run_shear_oracle, run_truncation_oracle, OracleReport};
pub use pipeline::{
    base_coefficient, bounds_table, bounds_table_detailed, build_integrand, calibrated_delta,
    cauchy_positive_beyond,
    check_estimates, first_nonpositive_integer, fujiwara_positivity, ggl_computed_bound,
    ggl_degree_bound, ggl_theorem_bound, kobayashi_bound, pole_shift_coefficient,
    tautological_integral, BoundReport, BoundsRow, DegreePolynomial, EstimateEntry,
    IntegrandConfig, IntegrandForm, RootBoundCheck,
};
pub use rational::Rational;
pub use residue::{
    dehomogenized_residue, fixed_point_sum, iterated_residue, projective_residue, ResidueResult,
    UniPoly,
};
pub use series::{geom_inverse, linear_inverse, LaurentSeries, Monomial, OrderSpec};
