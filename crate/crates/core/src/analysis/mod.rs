//! Expectation engines, utility ratios, bound verifiers and behavioral
//! detectors.

mod behavior;
mod constructions;
mod expectation;
mod monotonicity;
pub mod random;
mod ratio;
mod report;
mod sampling;
mod verify;

pub use behavior::{
    achievable_utility, detect_paradox_of_choice, detect_quality_paradox, Agent,
    QualityParadoxReport,
};
pub use expectation::{
    estimate, exact_expectation, exact_outcome, monte_carlo, EstimateWithCI, OutcomeExpectation,
};
pub use ratio::{
    expected_coord_max_sum, expected_max_value, gamma_of, ratio_report, surplus, RatioReport,
    RatioValue, Surplus,
};
pub use report::{CounterexampleReport, ReportRow};
pub use sampling::{sample_representation, Proportion, RepresentationSample};
pub use verify::{verify_online_bound, verify_prophet_bound, OnlineBoundCheck, ProphetBoundCheck};
pub use monotonicity::{
    check_lambda_patience, check_prepend_bound, check_suffix_append, LambdaPairCheck,
};
pub use constructions::{construction_checks, ConstructionCheck};
