//! Trimmed Kolmogorov distances.
//!
//! The distance between a reference law `F0` and the set of `α`-trimmings of
//! `F` reduces to a best uniform approximation of `Γ = F0 ∘ F⁻¹` by
//! nondecreasing `1/(1-α)`-Lipschitz functions pinned at `(0, 0)` and
//! `(1, 1)`. That problem is solved exactly on piecewise-linear
//! representations through running-extremum envelopes.

pub mod cli;
pub mod diff;
pub mod distribution;
pub mod envelopes;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod lipschitz_box;
pub mod monotone_box;
pub mod normal;
pub mod trimming;

pub use diff::{
    directional_derivative_lipschitz, directional_derivative_monotone, finite_difference_lipschitz,
    finite_difference_monotone, Derivative,
};
pub use distribution::{compose_gamma, empirical_cdf, DistributionKind, DistributionSpec};
pub use envelopes::{
    clamp_box, gamma_envelopes, pasch_hausdorff, ubhaya_envelopes, BoxBounds, LipEnvelopes, MonotoneEnvelopes,
};
pub use error::{Result, TrimError};
pub use gaussian::{gaussian_trimmed_distance, GaussianCase, Regime};
pub use grid::{sup_norm_distance, uniform_nodes, GridFunction, Interp};
pub use lipschitz_box::{best_lipschitz_box, minvalue, optimizer_sets, BoxLipResult, LipOptimizerReport};
pub use monotone_box::{best_monotone_box, rep1_expressions, MonotoneBoxResult, OptimizerSets, Rep1Report};
pub use trimming::{
    min_contamination_level, mixture_cdf, oracle_distance, trim_gamma, trimmed_distance, AlphaMinResult, TrimParams,
    TrimResult,
};
