//! Context-aware microgrid resilience scoring.
//!
//! A [`Scenario`] lists the threats a site faces. Each threat carries an
//! annual probability range and a fixed importance weight, and lists the
//! vulnerabilities it can exploit. Each vulnerability has a conditional
//! probability range and impact ranges on operational and infrastructural
//! resilience. [`run_scenario`] samples every threat/vulnerability pair by
//! Monte Carlo, aggregates residual risk per dimension and reports total
//! resilience as `1 - (operational + infrastructural) / 2`.
//! [`compare`] re-runs the simulation under intervention patches and ranks
//! them against the baseline.
//!
//! [`oracle`] holds the closed-form expectations the sampler is tested
//! against.

pub mod builtin;
pub mod document;
pub mod intervention;
pub mod model;
pub mod oracle;
pub mod rating;
pub mod sampling;
pub mod sim;
pub mod stats;

pub use builtin::builtin_new_england;
pub use document::{
    parse_patch, parse_patch_with, parse_scenario, parse_scenario_with, patch_from_value, scenario_from_value,
    serialize_patch, serialize_scenario, DocumentError, ParseOptions,
};
pub use intervention::{
    apply_patch, builtin_harden_generation, builtin_patches, builtin_underground_distribution, compare,
    percent_reduction, CompareError, ComparisonReport, Deltas, InterventionPatch, PatchError, PatchOp, PatchOutcome,
};
pub use model::{validate_scenario, BoundedRange, Dimension, Scenario, ThreatSpec, ValidationIssue, VulnerabilitySpec};
pub use rating::{classify_value, parse_rating_label, rating_to_range, RatingError, RatingLevel};
pub use sampling::{draw, residual_risk, Distribution};
pub use sim::{
    run_scenario, run_scenario_with_workers, total_resilience, Aggregation, DimensionResult, PairRisk,
    ResilienceResult, RunReport, SimConfig, SimError, ThreatRisk,
};
pub use stats::{Histogram, Summary};
