//! Exact checks of the subcritical guarantees on one instance.
//!
//! Each verifier computes both sides of its inequalities with the prior's
//! own arithmetic and returns `Error::Counterexample` carrying the full
//! instance as soon as one of them fails.

use serde_json::json;

use crate::analysis::expectation::exact_expectation;
use crate::analysis::ratio::{expected_max_value, gamma_of, surplus};
use crate::analysis::CounterexampleReport;
use crate::error::{Error, Result};
use crate::model::{prior_to_json, AgentParams, ProductPrior};
use crate::policies::{
    guarantee_alphas, optimal_biased_policy, optimal_rational_policy, threshold_from_alpha, Policy,
    ThresholdRule,
};
use crate::scalar::Scalar;

/// Everything computed while checking the offline guarantee.
#[derive(Clone, Debug, PartialEq)]
pub struct ProphetBoundCheck<N> {
    pub gamma: N,
    pub e_v_star: N,
    pub alphas: [N; 2],
    pub rules: [ThresholdRule<N>; 2],
    /// E[U^α] for each α.
    pub threshold_values: [N; 2],
    /// ((1+λ)α − kλ)T + (1−α)Σₜ E[(‖σ⁽ᵗ⁾‖₁ − T)⁺] for each α.
    pub claim_floors: [N; 2],
    pub best_threshold: N,
    pub optimal_biased: N,
    /// (1−λ(k−1))·max{γ/(1+λ+k), 1/(2+λ)}
    pub factor: N,
}

impl<N: Scalar> ProphetBoundCheck<N> {
    pub fn bound(&self) -> N {
        self.factor.clone() * self.e_v_star.clone()
    }
}

/// Offline guarantee: the better of the two threshold rules earns at least
/// (1−λ(k−1))·max{γ/(1+λ+k), 1/(2+λ)}·E[V*], and so does the optimum.
/// Also checks the per-α floor and both surplus inequalities at each T.
pub fn verify_prophet_bound<N: Scalar>(
    prior: &ProductPrior<N>,
    params: &AgentParams<N>,
    budget: u64,
) -> Result<ProphetBoundCheck<N>> {
    let (a1, a2) = guarantee_alphas(params)?;
    let lambda = params.lambda().clone();
    let k = N::from_int(params.k() as i64);
    let one = N::one();
    let gamma = gamma_of(prior)?;
    let e_v_star = expected_max_value(prior);

    let mut rules = Vec::with_capacity(2);
    let mut values = Vec::with_capacity(2);
    let mut floors = Vec::with_capacity(2);
    for alpha in [&a1, &a2] {
        let rule = threshold_from_alpha(prior, alpha)?;
        let t = rule.threshold.clone();
        let value = exact_expectation(prior, &Policy::threshold(rule.clone())?, params, budget)?;
        let s = surplus(prior, &t);
        check(
            "surplus: per-candidate >= best-candidate",
            &s.per_candidate,
            &s.best_candidate,
            prior,
            params,
        )?;
        check(
            "surplus: per-candidate >= per-dimension",
            &s.per_candidate,
            &s.per_dimension,
            prior,
            params,
        )?;
        let floor = ((one.clone() + lambda.clone()) * alpha.clone() - k.clone() * lambda.clone())
            * t
            + (one.clone() - alpha.clone()) * s.per_candidate;
        check("threshold utility floor", &value, &floor, prior, params)?;
        rules.push(rule);
        values.push(value);
        floors.push(floor);
    }

    let best_threshold = values[0].clone().max_of(values[1].clone());
    let optimal_biased = optimal_biased_policy(prior, params, true, budget)?.expected_utility;
    let two = N::from_int(2);
    let factor = (one.clone() - params.bias())
        * (gamma.clone() / (one.clone() + lambda.clone() + k)).max_of(one / (two + lambda));
    let bound = factor.clone() * e_v_star.clone();
    check("offline guarantee (best threshold)", &best_threshold, &bound, prior, params)?;
    check("optimal online >= best threshold", &optimal_biased, &best_threshold, prior, params)?;

    let [r1, r2]: [ThresholdRule<N>; 2] = rules.try_into().expect("two rules");
    let [v1, v2]: [N; 2] = values.try_into().expect("two values");
    let [f1, f2]: [N; 2] = floors.try_into().expect("two floors");
    Ok(ProphetBoundCheck {
        gamma,
        e_v_star,
        alphas: [a1, a2],
        rules: [r1, r2],
        threshold_values: [v1, v2],
        claim_floors: [f1, f2],
        best_threshold,
        optimal_biased,
        factor,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OnlineBoundCheck<N> {
    pub e_v_star: N,
    pub optimal_rational: N,
    pub optimal_biased: N,
    /// (1+λ)/(1−λ(k−1))
    pub ratio_bound: N,
}

/// Online guarantee E[U*_gr]·(1−λ(k−1)) ≤ (1+λ)·E[U*_gb], written without
/// division, and the classical E[U*_gr] ≥ ½·E[V*].
pub fn verify_online_bound<N: Scalar>(
    prior: &ProductPrior<N>,
    params: &AgentParams<N>,
    budget: u64,
) -> Result<OnlineBoundCheck<N>> {
    let one = N::one();
    let slack = one.clone() - params.bias();
    if !slack.is_positive_tol() {
        return Err(Error::invalid(format!(
            "online guarantee needs lambda*(k-1) < 1, got {}",
            params.bias().render()
        )));
    }
    let e_v_star = expected_max_value(prior);
    let gr = optimal_rational_policy(prior)?.expected_utility;
    let gb = optimal_biased_policy(prior, params, true, budget)?.expected_utility;
    let lifted = (one.clone() + params.lambda().clone()) * gb.clone();
    check("online guarantee", &lifted, &(gr.clone() * slack.clone()), prior, params)?;
    let half = e_v_star.clone() / N::from_int(2);
    check("classical half of E[V*]", &gr, &half, prior, params)?;
    Ok(OnlineBoundCheck {
        e_v_star,
        optimal_rational: gr,
        optimal_biased: gb,
        ratio_bound: (one + params.lambda().clone()) / slack,
    })
}

/// Fails with a counterexample unless `lhs ≥ rhs`.
fn check<N: Scalar>(
    name: &str,
    lhs: &N,
    rhs: &N,
    prior: &ProductPrior<N>,
    params: &AgentParams<N>,
) -> Result<()> {
    if lhs.tol_ge(rhs) {
        return Ok(());
    }
    Err(Error::Counterexample(Box::new(CounterexampleReport {
        check: name.to_string(),
        lambda: params.lambda().render(),
        k: params.k(),
        lhs: lhs.render(),
        rhs: rhs.render(),
        instance: json!({ "prior": prior_to_json(prior) }),
    })))
}
