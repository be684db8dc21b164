//! Monotonicity of the optimal biased rule in λ and in the candidate set.

use serde_json::json;

use crate::analysis::expectation::exact_outcome;
use crate::analysis::CounterexampleReport;
use crate::error::{Error, Result};
use crate::model::{
    offline_optimal_biased, prior_to_json, sequence_to_json, vector_to_json, AgentParams,
    FiniteDistribution, ProductPrior, Sequence, ValueVector,
};
use crate::policies::{optimal_biased_policy, patience_compare, Policy, PatienceVerdict};
use crate::scalar::Scalar;

/// What the λ-pair check measured.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaPairCheck<N> {
    /// E[‖selected‖₁] under the less averse optimal rule.
    pub value_low: N,
    pub value_high: N,
    pub utility_low: N,
    pub utility_high: N,
}

/// The optimal rule at `low` never stops before the one at `high`, and in
/// consequence selects at least as much expected value.
pub fn check_lambda_patience<N: Scalar>(
    prior: &ProductPrior<N>,
    low: &N,
    high: &N,
    budget: u64,
) -> Result<LambdaPairCheck<N>> {
    if low.tol_gt(high) {
        return Err(Error::invalid("low lambda must not exceed high lambda"));
    }
    let p_low = AgentParams::new(low.clone(), prior.k())?;
    let p_high = AgentParams::new(high.clone(), prior.k())?;
    let a = Policy::optimal_biased(optimal_biased_policy(prior, &p_low, true, budget)?);
    let b = Policy::optimal_biased(optimal_biased_policy(prior, &p_high, true, budget)?);
    // Each rule is scored with its own λ; stopping times do not depend on it.
    let verdict = patience_compare(&a, &b, prior, &p_low, budget)?;
    if let PatienceVerdict::Incomparable(w) = verdict {
        return Err(counterexample(
            "optimal rule at lower lambda is more patient",
            low,
            prior.k(),
            &N::from_int(w.a_stop as i64),
            &N::from_int(w.b_stop as i64),
            json!({ "prior": prior_to_json(prior), "high_lambda": high.render(),
                    "witness": sequence_to_json(&w.sequence) }),
        ));
    }
    let out_low = exact_outcome(prior, &a, &p_low, budget)?;
    let out_high = exact_outcome(prior, &b, &p_high, budget)?;
    if !out_low.value.tol_ge(&out_high.value) {
        return Err(counterexample(
            "more patient rule selects more expected value",
            low,
            prior.k(),
            &out_low.value,
            &out_high.value,
            json!({ "prior": prior_to_json(prior), "high_lambda": high.render() }),
        ));
    }
    if !out_low.utility.tol_ge(&out_high.utility) {
        return Err(counterexample(
            "lower lambda earns more utility",
            low,
            prior.k(),
            &out_low.utility,
            &out_high.utility,
            json!({ "prior": prior_to_json(prior), "high_lambda": high.render() }),
        ));
    }
    Ok(LambdaPairCheck {
        value_low: out_low.value,
        value_high: out_high.value,
        utility_low: out_low.utility,
        utility_high: out_high.utility,
    })
}

/// Appending independent steps never lowers the optimal expected utility.
/// Returns (before, after).
pub fn check_suffix_append<N: Scalar>(
    prior: &ProductPrior<N>,
    more: &[FiniteDistribution<N>],
    params: &AgentParams<N>,
    budget: u64,
) -> Result<(N, N)> {
    let before = optimal_biased_policy(prior, params, true, budget)?.expected_utility;
    let longer = prior.append(more)?;
    let after = optimal_biased_policy(&longer, params, true, budget)?.expected_utility;
    if !after.tol_ge(&before) {
        return Err(counterexample(
            "appending candidates never hurts",
            params.lambda(),
            params.k(),
            &after,
            &before,
            json!({ "prior": prior_to_json(&longer), "original_n": prior.n() }),
        ));
    }
    Ok((before, after))
}

/// Putting `front` ahead of σ costs at most a factor 1+λ of the best
/// hindsight utility. Returns (U(σ), U(front + σ)).
pub fn check_prepend_bound<N: Scalar>(
    sigma: &Sequence<N>,
    front: &ValueVector<N>,
    params: &AgentParams<N>,
) -> Result<(N, N)> {
    let before = offline_optimal_biased(sigma, params, true)?.utility;
    let extended = sigma.prepend(front.clone())?;
    let after = offline_optimal_biased(&extended, params, true)?.utility;
    let floor = before.clone() / (N::one() + params.lambda().clone());
    if !after.tol_ge(&floor) {
        return Err(counterexample(
            "prepending costs at most a factor 1+lambda",
            params.lambda(),
            params.k(),
            &after,
            &floor,
            json!({ "sequence": sequence_to_json(sigma), "front": vector_to_json(front) }),
        ));
    }
    Ok((before, after))
}

fn counterexample<N: Scalar>(
    check: &str,
    lambda: &N,
    k: usize,
    lhs: &N,
    rhs: &N,
    instance: serde_json::Value,
) -> Error {
    Error::Counterexample(Box::new(CounterexampleReport {
        check: check.into(),
        lambda: lambda.render(),
        k,
        lhs: lhs.render(),
        rhs: rhs.render(),
        instance,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::random::{random_prior, random_step, PriorShape};
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn random_priors_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let shape = PriorShape::default();
        for _ in 0..40 {
            let prior = random_prior(&mut rng, &shape);
            check_lambda_patience(&prior, &q(1, 5), &q(4, 5), 10_000).unwrap();
            let params = AgentParams::new(q(1, 2), prior.k()).unwrap();
            let extra = random_step(&mut rng, &shape, prior.k());
            check_suffix_append(&prior, &[extra], &params, 10_000).unwrap();
        }
    }

    #[test]
    fn prepend_on_motivating_example() {
        let s = Sequence::from_rows(&[&[1, 0], &[0, 1], &[2, 0]]).unwrap();
        let params = AgentParams::new(q(2, 1), 2).unwrap();
        let front = ValueVector::from_ints(&[0, 5]).unwrap();
        let (before, after) = check_prepend_bound(&s, &front, &params).unwrap();
        assert_eq!(before, q(1, 1));
        assert_eq!(after, q(5, 1));
    }
}
