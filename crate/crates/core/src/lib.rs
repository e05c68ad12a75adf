//! Neyman-Pearson regions of finite-support distribution pairs.
//!
//! The crate computes the exact boundary `B(alpha)` of the achievable
//! (false positive, false negative) region for two categorical distributions,
//! evaluates f-divergence lower bounds and Chernoff-coefficient upper bounds on
//! that boundary, builds pairs that realize a prescribed boundary, and answers
//! Bayes-error, ROC and sample-size queries.
//!
//! ```
//! use np_region::{exact_boundary, CategoricalPair};
//!
//! let pair = CategoricalPair::new(vec![0.6, 0.3, 0.1], vec![0.1, 0.3, 0.6], None).unwrap();
//! let b = exact_boundary(&pair);
//! assert!((b.eval(0.25).unwrap() - 0.25).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod boundary;
pub mod curve;
pub mod decision;
pub mod distributions;
pub mod divergences;
pub mod error;
pub mod format;
pub mod hull;
pub mod lower_bounds;
pub mod numeric;
pub mod realization;
pub mod upper_bounds;

pub use boundary::{
    brute_force_boundary, eval_boundary, exact_boundary, region_contains, PiecewiseLinearBoundary,
};
pub use curve::{BoundCurve, CurveShape, Line, Orientation, Side};
pub use decision::{
    bayes_error, ber_bounds, conjugate, roc_mixing_weight, roc_points, Conjugate, MixingPlan,
    PriorPair,
};
pub use distributions::{
    discretize_analytic, discretize_analytic_with, lr_profile, tensor_power, AnalyticFamily,
    CategoricalPair, CellRule, DiscretizedPair, GridSpec, LrProfile, LrSegment,
};
pub use divergences::{
    alpha_divergence, chernoff_coefficient, f_divergence, generator_value, DivergenceValue,
    FGenerator,
};
pub use error::{Error, Result};
pub use lower_bounds::{
    generic_lower, hellinger_supporting_line, hockey_envelope, hockey_stick_line, named_lower,
    reversed_lower, LowerKind,
};
pub use realization::{realize_categorical, realize_unit_interval, verify_realization, CdfTable};
pub use upper_bounds::{
    achievability_sample_size, chernoff_envelope, chernoff_tangent_line, convex_refine,
    min_sample_size, refined_chernoff,
};
