use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{AgentParams, ProductPrior};
use crate::policies::{
    optimal_biased_policy, optimal_rational_policy, threshold_from_alpha, Policy, PolicyKind,
    ThresholdRule,
};
use crate::scalar::Scalar;

/// Serializable policy description, resolved against a prior on use.
///
/// ```json
/// {"kind": "threshold", "alpha": 0.8, "seed": 42}
/// {"kind": "threshold", "threshold": 5, "atom_accept_prob": "1/2", "seed": 1}
/// {"kind": "fixed_index", "t": 2}
/// {"kind": "optimal_biased", "allow_no_selection": false}
/// {"kind": "optimal_rational"}
/// {"kind": "accept_last"}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySpec {
    Threshold {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        threshold: Option<Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atom_accept_prob: Option<Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    FixedIndex {
        t: usize,
    },
    OptimalBiased {
        #[serde(default = "default_true")]
        allow_no_selection: bool,
    },
    OptimalRational,
    AcceptLast,
}

fn default_true() -> bool {
    true
}

fn number<N: Scalar>(v: &Value, what: &str) -> Result<N> {
    match v {
        Value::Number(x) => N::parse(&x.to_string()),
        Value::String(s) => N::parse(s),
        _ => Err(Error::Parse(format!("{what} must be a number or \"num/den\" string"))),
    }
}

impl PolicySpec {
    pub fn resolve<N: Scalar>(
        &self,
        prior: &ProductPrior<N>,
        params: &AgentParams<N>,
        budget: u64,
    ) -> Result<Policy<N>> {
        Ok(match self {
            PolicySpec::Threshold {
                alpha,
                threshold,
                atom_accept_prob,
                seed,
            } => {
                let rule = match (alpha, threshold) {
                    (Some(a), None) => threshold_from_alpha(prior, &number(a, "alpha")?)?,
                    (None, Some(t)) => ThresholdRule {
                        threshold: number(t, "threshold")?,
                        atom_accept_prob: match atom_accept_prob {
                            Some(p) => number(p, "atom_accept_prob")?,
                            None => N::one(),
                        },
                    },
                    _ => {
                        return Err(Error::invalid(
                            "threshold policy needs exactly one of alpha or threshold",
                        ))
                    }
                };
                let policy = Policy::threshold(rule)?;
                match seed {
                    Some(s) => policy.with_seed(*s),
                    None => policy,
                }
            }
            PolicySpec::FixedIndex { t } => {
                let p = Policy::new(PolicyKind::FixedIndex(*t));
                p.check_index(prior.n())?;
                p
            }
            PolicySpec::OptimalBiased { allow_no_selection } => Policy::optimal_biased(
                optimal_biased_policy(prior, params, *allow_no_selection, budget)?,
            ),
            PolicySpec::OptimalRational => Policy::optimal_rational(optimal_rational_policy(prior)?),
            PolicySpec::AcceptLast => Policy::new(PolicyKind::AcceptLast),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sequence;
    use crate::scalar::Rational;

    #[test]
    fn parses_and_resolves() {
        let spec: PolicySpec =
            serde_json::from_str(r#"{"kind":"threshold","alpha":0.8,"seed":42}"#).unwrap();
        let prior = ProductPrior::deterministic(&Sequence::<Rational>::from_rows(&[&[5, 0]]).unwrap());
        let params = AgentParams::new(Rational::from_int(0), 2).unwrap();
        let policy = spec.resolve(&prior, &params, 100).unwrap();
        assert_eq!(policy.seed, Some(42));
        match policy.kind {
            PolicyKind::Threshold { atom_accept_prob, .. } => {
                assert_eq!(atom_accept_prob, Rational::from_ratio(4, 5))
            }
            _ => panic!("expected a threshold"),
        }
        let spec: PolicySpec = serde_json::from_str(r#"{"kind":"accept_last"}"#).unwrap();
        assert_eq!(serde_json::to_string(&spec).unwrap(), r#"{"kind":"accept_last"}"#);
        assert!(serde_json::from_str::<PolicySpec>(r#"{"kind":"nope"}"#).is_err());
        let both: PolicySpec =
            serde_json::from_str(r#"{"kind":"threshold","alpha":0.5,"threshold":1}"#).unwrap();
        assert!(both.resolve(&prior, &params, 100).is_err());
    }
}
