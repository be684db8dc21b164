//! Domain types, the super-candidate reference point and pointwise utilities.

mod json;
mod prior;
mod sequence;
mod utility;
mod vector;

pub use json::{
    distribution_from_json, distribution_to_json, prior_from_json, prior_or_sequence_from_json,
    prior_to_json, sequence_from_json, sequence_to_json, vector_from_json, vector_to_json,
};
pub use prior::{Atom, FiniteDistribution, ProductPrior, Realizations};
pub use sequence::{
    higher_quality, is_succinct, pointwise_dominates, representation, super_candidate, Sequence,
};
pub use utility::{
    biased_gambler_utility, biased_prophet_utility, no_selection_utility, offline_optimal_biased,
    offline_optimal_prophet, rational_prophet_value, rational_utility, utility_against,
    AgentParams, Regime, Selection, StoppingOutcome,
};
pub use vector::ValueVector;
