use std::fmt;

use crate::error::{Error, Result};
use crate::model::{AgentParams, ProductPrior, Regime};
use crate::policies::{optimal_biased_policy, optimal_rational_policy};
use crate::scalar::Scalar;

/// A utility ratio, or the marker that its denominator E[U*_gb] is not positive.
#[derive(Clone, Debug, PartialEq)]
pub enum RatioValue<N> {
    Value(N),
    NonPositiveDenominator,
}

impl<N: Scalar> RatioValue<N> {
    pub fn of(numer: &N, denom: &N) -> Self {
        if denom.is_positive_tol() {
            RatioValue::Value(numer.clone() / denom.clone())
        } else {
            RatioValue::NonPositiveDenominator
        }
    }

    pub fn value(&self) -> Option<&N> {
        match self {
            RatioValue::Value(v) => Some(v),
            RatioValue::NonPositiveDenominator => None,
        }
    }

    /// The ratio, or `Error::NonPositiveDenominator` carrying `denom`.
    pub fn require(&self, denom: &N) -> Result<&N> {
        self.value()
            .ok_or_else(|| Error::NonPositiveDenominator(denom.render()))
    }

    pub fn render(&self) -> String {
        match self {
            RatioValue::Value(v) => v.render(),
            RatioValue::NonPositiveDenominator => "undefined".into(),
        }
    }
}

impl<N: Scalar> fmt::Display for RatioValue<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport<N> {
    /// E[U_pr] = E[V*].
    pub e_prophet_rational: N,
    /// E[U*_gr], the optimal online rational value.
    pub e_gambler_rational_opt: N,
    /// E[U*_gb], the optimal online biased value.
    pub e_gambler_biased_opt: N,
    pub prophet_ratio: RatioValue<N>,
    pub online_ratio: RatioValue<N>,
    pub bias: N,
    pub regime: Regime,
}

/// All three expectations exactly, by the V* distribution and both DPs.
pub fn ratio_report<N: Scalar>(
    prior: &ProductPrior<N>,
    params: &AgentParams<N>,
    budget: u64,
) -> Result<RatioReport<N>> {
    let e_upr = expected_max_value(prior);
    let e_ugr = optimal_rational_policy(prior)?.expected_utility;
    let e_ugb = optimal_biased_policy(prior, params, true, budget)?.expected_utility;
    Ok(RatioReport {
        prophet_ratio: RatioValue::of(&e_upr, &e_ugb),
        online_ratio: RatioValue::of(&e_ugr, &e_ugb),
        e_prophet_rational: e_upr,
        e_gambler_rational_opt: e_ugr,
        e_gambler_biased_opt: e_ugb,
        bias: params.bias(),
        regime: params.regime(),
    })
}

/// E[V*] with V* = maxₜ ‖σ⁽ᵗ⁾‖₁.
pub fn expected_max_value<N: Scalar>(prior: &ProductPrior<N>) -> N {
    mean(&prior.max_value_distribution())
}

/// E[Σⱼ S*ⱼ] with S*ⱼ the largest entry seen on dimension j.
pub fn expected_coord_max_sum<N: Scalar>(prior: &ProductPrior<N>) -> N {
    (0..prior.k()).fold(N::zero(), |acc, j| {
        acc + mean(&prior.coord_max_distribution(j))
    })
}

/// γ = E[Σⱼ S*ⱼ] / E[V*], which lies in [1, k].
pub fn gamma_of<N: Scalar>(prior: &ProductPrior<N>) -> Result<N> {
    let v = expected_max_value(prior);
    if !v.is_positive_tol() {
        return Err(Error::invalid("gamma needs E[V*] > 0"));
    }
    Ok(expected_coord_max_sum(prior) / v)
}

/// Expected surpluses over a threshold T.
#[derive(Clone, Debug, PartialEq)]
pub struct Surplus<N> {
    /// Σₜ E[(‖σ⁽ᵗ⁾‖₁ − T)⁺]
    pub per_candidate: N,
    /// E[(V* − T)⁺]
    pub best_candidate: N,
    /// Σⱼ E[(S*ⱼ − T)⁺]
    pub per_dimension: N,
}

pub fn surplus<N: Scalar>(prior: &ProductPrior<N>, threshold: &N) -> Surplus<N> {
    let over = |dist: &[(N, N)]| {
        dist.iter().fold(N::zero(), |acc, (x, p)| {
            acc + p.clone() * (x.clone() - threshold.clone()).positive_part()
        })
    };
    let per_candidate = prior.steps().iter().fold(N::zero(), |acc, step| {
        acc + step.atoms().iter().fold(N::zero(), |a, atom| {
            a + atom.prob.clone() * (atom.value.l1() - threshold.clone()).positive_part()
        })
    });
    Surplus {
        per_candidate,
        best_candidate: over(&prior.max_value_distribution()),
        per_dimension: (0..prior.k()).fold(N::zero(), |acc, j| {
            acc + over(&prior.coord_max_distribution(j))
        }),
    }
}

fn mean<N: Scalar>(dist: &[(N, N)]) -> N {
    dist.iter()
        .fold(N::zero(), |acc, (x, p)| acc + x.clone() * p.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{alternating_geometric, alternating_linear, identical_value, worstcase_mixed};
    use crate::policies::DEFAULT_STATE_BUDGET;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn motivating_example_ratios() {
        let s = alternating_geometric(6, 2, &q(2, 1)).unwrap();
        let params = AgentParams::new(q(2, 1), 2).unwrap();
        let r = ratio_report(&ProductPrior::deterministic(&s), &params, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(r.prophet_ratio, RatioValue::Value(q(4, 1)));
        assert_eq!(r.online_ratio, RatioValue::Value(q(4, 1)));
        assert_eq!(r.regime, Regime::Supercritical);
    }

    #[test]
    fn linear_family_ratio() {
        let s = alternating_linear(6, 2).unwrap();
        let params = AgentParams::new(q(1, 1), 2).unwrap();
        let r = ratio_report(&ProductPrior::deterministic(&s), &params, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(r.e_gambler_biased_opt, q(1, 1));
        assert_eq!(r.prophet_ratio, RatioValue::Value(q(3, 1)));
        assert_eq!(r.regime, Regime::Critical);
    }

    #[test]
    fn mixed_instance_values() {
        let prior = worstcase_mixed(2, 2, &q(1, 2), &q(1, 5)).unwrap();
        let params = AgentParams::new(q(1, 2), 2).unwrap();
        let r = ratio_report(&prior, &params, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(r.e_prophet_rational, q(3, 1));
        assert_eq!(r.e_gambler_biased_opt, q(1, 1));
        assert_eq!(r.prophet_ratio, RatioValue::Value(q(3, 1)));
    }

    #[test]
    fn gamma_of_identical_value() {
        let s = identical_value(3, &q(2, 1)).unwrap();
        assert_eq!(gamma_of(&ProductPrior::deterministic(&s)).unwrap(), q(3, 1));
        let single = crate::model::Sequence::from_rows(&[&[2, 1]]).unwrap();
        assert_eq!(gamma_of(&ProductPrior::<Rational>::deterministic(&single)).unwrap(), q(1, 1));
    }

    #[test]
    fn non_positive_denominator() {
        let r = RatioValue::of(&q(3, 1), &q(0, 1));
        assert_eq!(r, RatioValue::NonPositiveDenominator);
        assert!(matches!(r.require(&q(0, 1)), Err(Error::NonPositiveDenominator(_))));
    }
}
