//! Backward induction for the optimal online rules.
//!
//! The biased gambler's utility depends on the history only through the
//! super candidate, so the state at step t is s⁽ᵗ⁻¹⁾:
//!
//! ```text
//! V_t(s)     = Σ_v p(v) · max(U(v, s∨v), V_{t+1}(s∨v))
//! V_{n+1}(s) = −λ‖s‖₁        (declining allowed)
//!            = −∞            (last candidate forced)
//! ```
//!
//! Ties go to accepting.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{utility_against, vector_to_json, AgentParams, ProductPrior, ValueVector};
use crate::scalar::Scalar;

pub const DEFAULT_STATE_BUDGET: u64 = 1_000_000;

type StateKey<N> = Vec<<N as Scalar>::Key>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpKind {
    Biased,
    Rational,
}

/// One row of the decision table: at `step`, from super candidate `state`
/// (absent for the rational rule), these atom values are accepted.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow<N> {
    pub step: usize,
    pub state: Option<ValueVector<N>>,
    pub continuation: Option<N>,
    pub accept: Vec<ValueVector<N>>,
}

#[derive(Clone, Debug)]
pub struct DpResult<N: Scalar> {
    pub expected_utility: N,
    pub state_count: usize,
    pub policy_table: Vec<TableRow<N>>,
    kind: DpKind,
    lambda: N,
    allow_no_selection: bool,
    /// `continuation[t-1][s]` is V_{t+1}(s) for post-step state s; `None` is −∞.
    continuation: Vec<BTreeMap<StateKey<N>, Option<N>>>,
}

impl<N: Scalar> DpResult<N> {
    pub fn kind(&self) -> DpKind {
        self.kind
    }

    pub fn lambda(&self) -> &N {
        &self.lambda
    }

    pub fn allows_no_selection(&self) -> bool {
        self.allow_no_selection
    }

    pub fn horizon(&self) -> usize {
        self.continuation.len()
    }

    /// Accept-or-continue at step `t` given the candidate and the super
    /// candidate including it.
    pub fn accepts(&self, t: usize, value: &ValueVector<N>, post: &ValueVector<N>) -> Result<bool> {
        let layer = self
            .continuation
            .get(t.wrapping_sub(1))
            .ok_or_else(|| Error::invalid(format!("step {t} beyond the solved horizon")))?;
        let (now, key) = match self.kind {
            DpKind::Biased => (utility_against(value, post, &self.lambda), post.key()),
            DpKind::Rational => (value.l1(), Vec::new()),
        };
        let cont = layer.get(&key).ok_or_else(|| {
            Error::invalid(format!(
                "state {post} at step {t} is unreachable under the solved prior"
            ))
        })?;
        Ok(match cont {
            None => true,
            Some(c) => now.tol_ge(c),
        })
    }

    pub fn to_json(&self) -> Value {
        let num = |x: &N| Value::String(x.render());
        json!({
            "kind": match self.kind { DpKind::Biased => "optimal_biased", DpKind::Rational => "optimal_rational" },
            "lambda": num(&self.lambda),
            "allow_no_selection": self.allow_no_selection,
            "expected_utility": num(&self.expected_utility),
            "state_count": self.state_count,
            "table": self.policy_table.iter().map(|r| json!({
                "step": r.step,
                "state": r.state.as_ref().map(vector_to_json),
                "continuation": r.continuation.as_ref().map(num),
                "accept": r.accept.iter().map(vector_to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Exact optimal expected utility of the biased gambler, with its decision
/// table. Fails with `ResourceLimit` once the reachable super-candidate
/// states across all steps exceed `budget`.
pub fn optimal_biased_policy<N: Scalar>(
    prior: &ProductPrior<N>,
    params: &AgentParams<N>,
    allow_no_selection: bool,
    budget: u64,
) -> Result<DpResult<N>> {
    if prior.k() != params.k() {
        return Err(Error::invalid(format!(
            "agent has k={}, prior has k={}",
            params.k(),
            prior.k()
        )));
    }
    let lambda = params.lambda().clone();
    let n = prior.n();

    // layers[t] holds the reachable super candidates after t steps.
    let mut layers: Vec<BTreeMap<StateKey<N>, ValueVector<N>>> = Vec::with_capacity(n + 1);
    let zero = ValueVector::zeros(prior.k());
    layers.push(BTreeMap::from([(zero.key(), zero)]));
    let mut count: u64 = 1;
    for step in prior.steps() {
        let mut next = BTreeMap::new();
        for s in layers.last().expect("seeded").values() {
            for atom in step.atoms() {
                let post = s.join(&atom.value);
                next.entry(post.key()).or_insert(post);
            }
        }
        count += next.len() as u64;
        if count > budget {
            return Err(Error::limit("super-candidate states", count, budget));
        }
        layers.push(next);
    }

    let mut value_next: BTreeMap<StateKey<N>, Option<N>> = layers[n]
        .iter()
        .map(|(key, s)| {
            let v = allow_no_selection.then(|| -(lambda.clone() * s.l1()));
            (key.clone(), v)
        })
        .collect();
    let mut continuation = vec![BTreeMap::new(); n];
    let mut rows_rev: Vec<Vec<TableRow<N>>> = Vec::with_capacity(n);
    for t in (1..=n).rev() {
        let step = &prior.steps()[t - 1];
        let mut value_here = BTreeMap::new();
        let mut rows = Vec::new();
        for (key, s) in &layers[t - 1] {
            let mut total = N::zero();
            let mut accept = Vec::new();
            for atom in step.atoms() {
                let post = s.join(&atom.value);
                let now = utility_against(&atom.value, &post, &lambda);
                let best = match &value_next[&post.key()] {
                    Some(c) if c.tol_gt(&now) => c.clone(),
                    _ => {
                        accept.push(atom.value.clone());
                        now
                    }
                };
                total = total + atom.prob.clone() * best;
            }
            rows.push(TableRow {
                step: t,
                state: Some(s.clone()),
                continuation: None,
                accept,
            });
            value_here.insert(key.clone(), Some(total));
        }
        rows_rev.push(rows);
        continuation[t - 1] = std::mem::replace(&mut value_next, value_here);
    }
    let expected_utility = value_next
        .into_values()
        .next()
        .flatten()
        .expect("initial state has a finite value");
    Ok(DpResult {
        expected_utility,
        state_count: count as usize,
        policy_table: rows_rev.into_iter().rev().flatten().collect(),
        kind: DpKind::Biased,
        lambda,
        allow_no_selection,
        continuation,
    })
}

/// Classical optimal stopping on ‖v‖₁: V_{n+1} = 0, V_t = E[max(‖v‖₁, V_{t+1})].
pub fn optimal_rational_policy<N: Scalar>(prior: &ProductPrior<N>) -> Result<DpResult<N>> {
    let n = prior.n();
    let mut cont = N::zero();
    let mut continuation = vec![BTreeMap::new(); n];
    let mut rows_rev = Vec::with_capacity(n);
    for t in (1..=n).rev() {
        let step = &prior.steps()[t - 1];
        let mut total = N::zero();
        let mut accept = Vec::new();
        for atom in step.atoms() {
            let v = atom.value.l1();
            let best = if v.tol_ge(&cont) {
                accept.push(atom.value.clone());
                v
            } else {
                cont.clone()
            };
            total = total + atom.prob.clone() * best;
        }
        continuation[t - 1].insert(Vec::new(), Some(cont.clone()));
        rows_rev.push(TableRow {
            step: t,
            state: None,
            continuation: Some(cont),
            accept,
        });
        cont = total;
    }
    Ok(DpResult {
        expected_utility: cont,
        state_count: n + 1,
        policy_table: rows_rev.into_iter().rev().collect(),
        kind: DpKind::Rational,
        lambda: N::zero(),
        allow_no_selection: true,
        continuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{offline_optimal_biased, FiniteDistribution, Sequence};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn vv(e: &[i64]) -> ValueVector<Rational> {
        ValueVector::from_ints(e).unwrap()
    }

    #[test]
    fn motivating_example_value_is_one() {
        let s = Sequence::from_rows(&[&[1, 0], &[0, 1], &[2, 0], &[0, 2], &[4, 0], &[0, 4]]).unwrap();
        let p = AgentParams::new(q(2, 1), 2).unwrap();
        let dp = optimal_biased_policy(&ProductPrior::deterministic(&s), &p, true, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(dp.expected_utility, q(1, 1));
        assert_eq!(dp.expected_utility, offline_optimal_biased(&s, &p, true).unwrap().utility);
    }

    #[test]
    fn two_step_wait_or_take() {
        let prior = ProductPrior::new(vec![
            FiniteDistribution::point(vv(&[2, 0])),
            FiniteDistribution::from_pairs(vec![(vv(&[0, 6]), q(1, 2)), (vv(&[0, 0]), q(1, 2))]).unwrap(),
        ])
        .unwrap();
        let p = AgentParams::new(q(1, 1), 2).unwrap();
        let dp = optimal_biased_policy(&prior, &p, true, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(dp.expected_utility, q(2, 1));
        assert!(dp.accepts(1, &vv(&[2, 0]), &vv(&[2, 0])).unwrap());
        assert_eq!(dp.policy_table[0].accept, vec![vv(&[2, 0])]);
    }

    #[test]
    fn zero_lambda_matches_rational() {
        let d = FiniteDistribution::from_pairs(vec![
            (vv(&[1, 0]), q(1, 3)),
            (vv(&[0, 2]), q(1, 3)),
            (vv(&[2, 2]), q(1, 3)),
        ])
        .unwrap();
        let prior = ProductPrior::iid(d, 3).unwrap();
        let b = optimal_biased_policy(&prior, &AgentParams::new(q(0, 1), 2).unwrap(), true, 1000).unwrap();
        let r = optimal_rational_policy(&prior).unwrap();
        assert_eq!(b.expected_utility, r.expected_utility);
    }

    #[test]
    fn rational_on_deterministic_is_max() {
        let s = Sequence::<Rational>::from_rows(&[&[1, 0], &[3, 1], &[0, 2]]).unwrap();
        let r = optimal_rational_policy(&ProductPrior::deterministic(&s)).unwrap();
        assert_eq!(r.expected_utility, q(4, 1));
    }

    #[test]
    fn forcing_the_last_pick_costs_nothing() {
        // accepting v at the end yields at least ‖v‖ − λ‖s‖ ≥ −λ‖s‖
        let d = FiniteDistribution::from_pairs(vec![
            (vv(&[3, 0]), q(1, 4)),
            (vv(&[0, 1]), q(1, 4)),
            (vv(&[0, 0]), q(1, 2)),
        ])
        .unwrap();
        let prior = ProductPrior::iid(d, 3).unwrap();
        let p = AgentParams::new(q(3, 2), 2).unwrap();
        let free = optimal_biased_policy(&prior, &p, true, 100).unwrap();
        let forced = optimal_biased_policy(&prior, &p, false, 100).unwrap();
        assert_eq!(free.expected_utility, forced.expected_utility);
    }

    #[test]
    fn budget_is_enforced() {
        let d = FiniteDistribution::from_pairs(vec![
            (vv(&[1, 0]), q(1, 2)),
            (vv(&[0, 1]), q(1, 2)),
        ])
        .unwrap();
        let prior = ProductPrior::iid(d, 3).unwrap();
        let p = AgentParams::new(q(1, 2), 2).unwrap();
        assert!(matches!(
            optimal_biased_policy(&prior, &p, true, 3),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
