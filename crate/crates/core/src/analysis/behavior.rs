use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    higher_quality, offline_optimal_biased, offline_optimal_prophet, rational_prophet_value,
    AgentParams, Sequence,
};
use crate::scalar::Scalar;

/// Whose achievable utility a behavioral check looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agent {
    /// Biased, judged against the super candidate at the time of choice.
    Gambler,
    /// Biased, judged against the super candidate of the whole sequence.
    Prophet,
    Rational,
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agent::Gambler => "gambler",
            Agent::Prophet => "prophet",
            Agent::Rational => "rational",
        })
    }
}

impl FromStr for Agent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gambler" => Ok(Agent::Gambler),
            "prophet" => Ok(Agent::Prophet),
            "rational" => Ok(Agent::Rational),
            _ => Err(Error::invalid(format!("unknown agent {s:?}"))),
        }
    }
}

/// Best utility the agent can reach on a fully known sequence. The gambler
/// may decline everything.
pub fn achievable_utility<N: Scalar>(sigma: &Sequence<N>, params: &AgentParams<N>, agent: Agent) -> Result<N> {
    Ok(match agent {
        Agent::Gambler => offline_optimal_biased(sigma, params, true)?.utility,
        Agent::Prophet => offline_optimal_prophet(sigma, params)?.utility,
        Agent::Rational => rational_prophet_value(sigma),
    })
}

/// True when going from `base` to `extended` strictly lowers the agent's
/// best utility. `extended` must add candidates at the end or at the front.
pub fn detect_paradox_of_choice<N: Scalar>(
    base: &Sequence<N>,
    extended: &Sequence<N>,
    params: &AgentParams<N>,
    agent: Agent,
) -> Result<bool> {
    let (b, e) = (base.candidates(), extended.candidates());
    if b.len() > e.len() || !(e.starts_with(b) || e.ends_with(b)) {
        return Err(Error::invalid(
            "base must be a prefix or a suffix of the extended sequence",
        ));
    }
    let before = achievable_utility(base, params, agent)?;
    let after = achievable_utility(extended, params, agent)?;
    Ok(before.tol_gt(&after))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QualityParadoxReport<N> {
    pub prophet_on_a: N,
    pub prophet_on_b: N,
    pub gambler_on_a: N,
    pub gambler_on_b: N,
    /// The biased prophet does strictly worse on the higher-quality set.
    pub prophet_worse_on_b: bool,
    /// The optimal biased gambler does at least as well on it.
    pub gambler_better_on_b: bool,
}

/// Compares both biased agents on `a` and on the higher-quality `b`.
/// Fails with a counterexample if the gambler ever does worse on `b`.
pub fn detect_quality_paradox<N: Scalar>(
    a: &Sequence<N>,
    b: &Sequence<N>,
    params: &AgentParams<N>,
) -> Result<QualityParadoxReport<N>> {
    if !higher_quality(b, a) {
        return Err(Error::invalid(
            "the second sequence must be of higher quality than the first",
        ));
    }
    let prophet_on_a = achievable_utility(a, params, Agent::Prophet)?;
    let prophet_on_b = achievable_utility(b, params, Agent::Prophet)?;
    let gambler_on_a = achievable_utility(a, params, Agent::Gambler)?;
    let gambler_on_b = achievable_utility(b, params, Agent::Gambler)?;
    let gambler_better_on_b = gambler_on_b.tol_ge(&gambler_on_a);
    if !gambler_better_on_b {
        return Err(Error::Counterexample(Box::new(
            crate::analysis::CounterexampleReport {
                check: "gambler prefers the higher-quality set".into(),
                lambda: params.lambda().render(),
                k: params.k(),
                lhs: gambler_on_b.render(),
                rhs: gambler_on_a.render(),
                instance: serde_json::json!({
                    "a": crate::model::sequence_to_json(a),
                    "b": crate::model::sequence_to_json(b),
                }),
            },
        )));
    }
    Ok(QualityParadoxReport {
        prophet_worse_on_b: prophet_on_a.tol_gt(&prophet_on_b),
        gambler_better_on_b,
        prophet_on_a,
        prophet_on_b,
        gambler_on_a,
        gambler_on_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{identical_value, quality_pair};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn prophet_regrets_more_options() {
        let full = identical_value(3, &q(2, 1)).unwrap();
        let first = full.prefix(1).unwrap();
        let params = AgentParams::new(q(1, 1), 3).unwrap();
        assert!(detect_paradox_of_choice(&first, &full, &params, Agent::Prophet).unwrap());
        assert_eq!(achievable_utility(&full, &params, Agent::Prophet).unwrap(), q(-2, 1));
        assert!(!detect_paradox_of_choice(&first, &full, &params, Agent::Gambler).unwrap());
        let rational = params.with_lambda(q(0, 1)).unwrap();
        for agent in [Agent::Gambler, Agent::Prophet, Agent::Rational] {
            assert!(!detect_paradox_of_choice(&first, &full, &rational, agent).unwrap());
        }
    }

    #[test]
    fn unrelated_sequences_are_rejected() {
        let a = Sequence::<Rational>::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        let b = Sequence::from_rows(&[&[0, 1], &[2, 0], &[1, 0]]).unwrap();
        let params = AgentParams::new(q(1, 1), 2).unwrap();
        assert!(detect_paradox_of_choice(&a, &b, &params, Agent::Gambler).is_err());
    }

    #[test]
    fn quality_pair_flags() {
        let (low, high) = quality_pair(2, &q(2, 1)).unwrap();
        let hot = AgentParams::new(q(3, 2), 2).unwrap();
        let r = detect_quality_paradox(&low, &high, &hot).unwrap();
        assert_eq!((r.prophet_on_a.clone(), r.prophet_on_b.clone()), (q(-1, 1), q(-2, 1)));
        assert!(r.prophet_worse_on_b && r.gambler_better_on_b);
        let mild = AgentParams::new(q(1, 2), 2).unwrap();
        assert!(!detect_quality_paradox(&low, &high, &mild).unwrap().prophet_worse_on_b);
        assert!(detect_quality_paradox(&high, &low, &mild).is_err());
    }
}
