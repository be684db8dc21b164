//! Stopping rules: the threshold rule A^α, exact optimal rules by backward
//! induction, and the patience order between rules.
//!
//! A [`Policy`] may be randomized (the threshold rule splits ties at an
//! atom), but every randomized policy is a finite mixture of deterministic
//! [`Rule`]s. [`Policy::branches`] exposes that mixture so exact engines can
//! weight branches instead of sampling them.

mod dp;
mod patience;
mod spec;
mod threshold;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    no_selection_utility, utility_against, AgentParams, Selection, Sequence, StoppingOutcome,
    ValueVector,
};
use crate::scalar::Scalar;

pub use dp::{
    optimal_biased_policy, optimal_rational_policy, DpKind, DpResult, TableRow,
    DEFAULT_STATE_BUDGET,
};
pub use patience::{patience_compare, PatienceVerdict, PatienceWitness};
pub use spec::PolicySpec;
pub use threshold::{guarantee_alphas, threshold_from_alpha, ThresholdRule};

#[derive(Clone, Debug)]
pub enum PolicyKind<N: Scalar> {
    /// Accept the first ‖v‖₁ > T; values equal to T are accepted when an
    /// up-front coin with bias `atom_accept_prob` comes up heads.
    Threshold { threshold: N, atom_accept_prob: N },
    /// Accept the candidate at this 1-based position.
    FixedIndex(usize),
    OptimalBiased(Arc<DpResult<N>>),
    OptimalRational(Arc<DpResult<N>>),
    AcceptLast,
}

#[derive(Clone, Debug)]
pub struct Policy<N: Scalar> {
    pub kind: PolicyKind<N>,
    pub seed: Option<u64>,
}

/// A deterministic online rule.
#[derive(Debug)]
pub enum Rule<'a, N: Scalar> {
    /// ‖v‖₁ ≥ T.
    AtLeast(&'a N),
    /// ‖v‖₁ > T.
    Above(&'a N),
    Index(usize),
    Table(&'a DpResult<N>),
    Last,
}

impl<N: Scalar> Clone for Rule<'_, N> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<N: Scalar> Copy for Rule<'_, N> {}

impl<N: Scalar> Rule<'_, N> {
    /// Decision at step `t` of `n`, seeing `value` with running super candidate `post`.
    pub fn accepts(&self, t: usize, n: usize, value: &ValueVector<N>, post: &ValueVector<N>) -> Result<bool> {
        Ok(match self {
            Rule::AtLeast(threshold) => value.l1().tol_ge(threshold),
            Rule::Above(threshold) => value.l1().tol_gt(threshold),
            Rule::Index(i) => t == *i,
            Rule::Table(dp) => dp.accepts(t, value, post)?,
            Rule::Last => t == n,
        })
    }

    /// Plays the rule on a realized sequence, scoring with the biased gambler utility.
    pub fn run(&self, sigma: &Sequence<N>, params: &AgentParams<N>) -> Result<StoppingOutcome<N>> {
        params.check_sequence(sigma)?;
        let n = sigma.n();
        let mut post: Option<ValueVector<N>> = None;
        for (i, v) in sigma.candidates().iter().enumerate() {
            let s = match post.take() {
                Some(prev) => prev.join(v),
                None => v.clone(),
            };
            if self.accepts(i + 1, n, v, &s)? {
                return Ok(StoppingOutcome {
                    selection: Selection::At(i + 1),
                    utility: utility_against(v, &s, params.lambda()),
                    value: v.l1(),
                });
            }
            post = Some(s);
        }
        Ok(StoppingOutcome {
            selection: Selection::NoSelection,
            utility: no_selection_utility(sigma, params),
            value: N::zero(),
        })
    }
}

impl<N: Scalar> Policy<N> {
    pub fn new(kind: PolicyKind<N>) -> Self {
        Policy { kind, seed: None }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn threshold(rule: ThresholdRule<N>) -> Result<Self> {
        if rule.threshold.is_negative_tol() {
            return Err(Error::invalid("threshold must be non-negative"));
        }
        if rule.atom_accept_prob.is_negative_tol() || rule.atom_accept_prob.tol_gt(&N::one()) {
            return Err(Error::invalid("atom acceptance probability must lie in [0, 1]"));
        }
        Ok(Self::new(PolicyKind::Threshold {
            threshold: rule.threshold,
            atom_accept_prob: rule.atom_accept_prob,
        }))
    }

    pub fn optimal_biased(dp: DpResult<N>) -> Self {
        Self::new(PolicyKind::OptimalBiased(Arc::new(dp)))
    }

    pub fn optimal_rational(dp: DpResult<N>) -> Self {
        Self::new(PolicyKind::OptimalRational(Arc::new(dp)))
    }

    /// True when the policy flips a coin with bias strictly inside (0, 1).
    pub fn is_randomized(&self) -> bool {
        match &self.kind {
            PolicyKind::Threshold { atom_accept_prob, .. } => {
                atom_accept_prob.is_positive_tol() && N::one().tol_gt(atom_accept_prob)
            }
            _ => false,
        }
    }

    /// The deterministic rules this policy mixes, with their weights.
    pub fn branches(&self) -> Vec<(N, Rule<'_, N>)> {
        match &self.kind {
            PolicyKind::Threshold {
                threshold,
                atom_accept_prob: p,
            } => {
                if !p.is_positive_tol() {
                    vec![(N::one(), Rule::Above(threshold))]
                } else if !N::one().tol_gt(p) {
                    vec![(N::one(), Rule::AtLeast(threshold))]
                } else {
                    vec![
                        (p.clone(), Rule::AtLeast(threshold)),
                        (N::one() - p.clone(), Rule::Above(threshold)),
                    ]
                }
            }
            PolicyKind::FixedIndex(t) => vec![(N::one(), Rule::Index(*t))],
            PolicyKind::OptimalBiased(dp) | PolicyKind::OptimalRational(dp) => {
                vec![(N::one(), Rule::Table(dp))]
            }
            PolicyKind::AcceptLast => vec![(N::one(), Rule::Last)],
        }
    }

    /// Picks the branch for one play. Deterministic policies ignore `rng`.
    pub fn draw_branch<R: Rng + ?Sized>(&self, rng: &mut R) -> Rule<'_, N> {
        let branches = self.branches();
        if branches.len() == 1 {
            return branches[0].1;
        }
        let u: f64 = rng.random();
        if u < branches[0].0.to_f64() {
            branches[0].1
        } else {
            branches[1].1
        }
    }

    pub(crate) fn check_index(&self, n: usize) -> Result<()> {
        if let PolicyKind::FixedIndex(t) = self.kind {
            if t == 0 || t > n {
                return Err(Error::invalid(format!("fixed index {t} out of range 1..={n}")));
            }
        }
        Ok(())
    }
}

/// Plays `policy` online on `sigma`. A randomized policy draws its coin
/// from its seed, which must then be present.
pub fn run_policy<N: Scalar>(
    policy: &Policy<N>,
    sigma: &Sequence<N>,
    params: &AgentParams<N>,
) -> Result<StoppingOutcome<N>> {
    policy.check_index(sigma.n())?;
    let rule = if policy.is_randomized() {
        let seed = policy
            .seed
            .ok_or_else(|| Error::invalid("a randomized threshold needs a seed"))?;
        policy.draw_branch(&mut ChaCha8Rng::seed_from_u64(seed))
    } else {
        policy.branches()[0].1
    };
    rule.run(sigma, params)
}
