use crate::error::Result;
use crate::model::{AgentParams, ProductPrior, Sequence};
use crate::policies::Policy;
use crate::scalar::Scalar;

/// A realization on which `a` stops strictly before `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct PatienceWitness<N> {
    pub sequence: Sequence<N>,
    /// Stopping times, with declining counted as n+1.
    pub a_stop: usize,
    pub b_stop: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PatienceVerdict<N> {
    /// `a` never stops earlier than `b`.
    MorePatient,
    Incomparable(PatienceWitness<N>),
}

impl<N> PatienceVerdict<N> {
    pub fn is_more_patient(&self) -> bool {
        matches!(self, PatienceVerdict::MorePatient)
    }
}

/// Checks whether `a` is more patient than `b` on every realization in the
/// support of `prior`. Randomized policies must satisfy the order under
/// every combination of their branches.
pub fn patience_compare<N: Scalar>(
    a: &Policy<N>,
    b: &Policy<N>,
    prior: &ProductPrior<N>,
    params: &AgentParams<N>,
    budget: u64,
) -> Result<PatienceVerdict<N>> {
    a.check_index(prior.n())?;
    b.check_index(prior.n())?;
    let n = prior.n();
    let a_rules = a.branches();
    let b_rules = b.branches();
    for (indices, _) in prior.realizations(budget)? {
        let sigma = prior.sequence_of(&indices);
        for (_, ra) in &a_rules {
            let a_stop = ra.run(&sigma, params)?.selection.stop_time(n);
            for (_, rb) in &b_rules {
                let b_stop = rb.run(&sigma, params)?.selection.stop_time(n);
                if a_stop < b_stop {
                    return Ok(PatienceVerdict::Incomparable(PatienceWitness {
                        sequence: sigma,
                        a_stop,
                        b_stop,
                    }));
                }
            }
        }
    }
    Ok(PatienceVerdict::MorePatient)
}
