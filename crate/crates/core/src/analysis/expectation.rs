//! Exact and sampled expectations of a policy's utility.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AgentParams, ProductPrior, Selection};
use crate::policies::Policy;
use crate::scalar::Scalar;

/// Trials drawn from one ChaCha stream. Each batch owns stream `b`, so the
/// estimate does not depend on how batches are spread over threads.
const BATCH: u64 = 4096;

const Z_95: f64 = 1.96;

/// Exact expectations of a policy under a prior.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeExpectation<N> {
    pub utility: N,
    /// E[‖selected‖₁], counting no selection as zero.
    pub value: N,
    pub selection_prob: N,
}

/// E[utility] by enumerating every joint realization and every branch of
/// the policy with its exact weight.
pub fn exact_expectation<N: Scalar>(
    prior: &ProductPrior<N>,
    policy: &Policy<N>,
    params: &AgentParams<N>,
    budget: u64,
) -> Result<N> {
    Ok(exact_outcome(prior, policy, params, budget)?.utility)
}

pub fn exact_outcome<N: Scalar>(
    prior: &ProductPrior<N>,
    policy: &Policy<N>,
    params: &AgentParams<N>,
    budget: u64,
) -> Result<OutcomeExpectation<N>> {
    check_k(prior, params)?;
    policy.check_index(prior.n())?;
    let branches = policy.branches();
    let mut acc = OutcomeExpectation {
        utility: N::zero(),
        value: N::zero(),
        selection_prob: N::zero(),
    };
    for (indices, prob) in prior.realizations(budget)? {
        let sigma = prior.sequence_of(&indices);
        for (weight, rule) in &branches {
            let w = prob.clone() * weight.clone();
            let out = rule.run(&sigma, params)?;
            acc.utility = acc.utility + w.clone() * out.utility;
            acc.value = acc.value + w.clone() * out.value;
            if out.selection != Selection::NoSelection {
                acc.selection_prob = acc.selection_prob + w;
            }
        }
    }
    Ok(acc)
}

/// Sample mean with a 95% normal-approximation half width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub half_width: f64,
    pub trials: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        self.half_width / Z_95
    }

    /// True when `target` lies within `widths` half widths of the mean.
    pub fn covers(&self, target: f64, widths: f64) -> bool {
        (self.mean - target).abs() <= widths * self.half_width
    }
}

/// Seeded Monte Carlo estimate of the policy's expected utility. The
/// randomized threshold coin is drawn per trial from the trial's stream.
pub fn monte_carlo<N: Scalar>(
    prior: &ProductPrior<N>,
    policy: &Policy<N>,
    params: &AgentParams<N>,
    trials: u64,
    seed: u64,
) -> Result<EstimateWithCI> {
    check_k(prior, params)?;
    policy.check_index(prior.n())?;
    estimate(trials, seed, |rng| {
        let rule = policy.draw_branch(rng);
        let sigma = prior.sequence_of(&prior.sample_indices(rng));
        Ok(rule.run(&sigma, params)?.utility.to_f64())
    })
}

/// Runs `sample` `trials` times over batched ChaCha8 streams and
/// summarizes. Bit-identical for a fixed `(trials, seed)`.
pub fn estimate<F>(trials: u64, seed: u64, sample: F) -> Result<EstimateWithCI>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let batches = trials.div_ceil(BATCH);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BATCH.min(trials - b * BATCH);
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(sample(&mut rng)?);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if total.count > 1 {
        total.m2 / (total.count - 1) as f64
    } else {
        0.0
    };
    Ok(EstimateWithCI {
        mean: total.mean,
        half_width: Z_95 * (var / total.count as f64).sqrt(),
        trials,
        seed,
    })
}

/// Running count, mean and centred sum of squares. Constant samples give
/// m2 = 0 exactly.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        Moments {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }
}

fn check_k<N: Scalar>(prior: &ProductPrior<N>, params: &AgentParams<N>) -> Result<()> {
    if prior.k() != params.k() {
        return Err(Error::invalid(format!(
            "agent has k={}, prior has k={}",
            params.k(),
            prior.k()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::worstcase_mixed;
    use crate::model::Sequence;
    use crate::policies::{run_policy, PolicyKind};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn accept_last_on_mixed_instance() {
        let prior = worstcase_mixed(2, 2, &q(1, 2), &q(1, 5)).unwrap();
        let params = AgentParams::new(q(1, 2), 2).unwrap();
        let policy = Policy::new(PolicyKind::AcceptLast);
        let e = exact_expectation(&prior, &policy, &params, 100).unwrap();
        assert_eq!(e, q(9, 20));
    }

    #[test]
    fn deterministic_prior_matches_run_and_has_zero_width() {
        let s = Sequence::from_rows(&[&[3, 0], &[0, 2], &[4, 3]]).unwrap();
        let params = AgentParams::new(q(1, 2), 2).unwrap();
        let policy = Policy::new(PolicyKind::FixedIndex(2));
        let prior = ProductPrior::deterministic(&s);
        let e = exact_expectation(&prior, &policy, &params, 10).unwrap();
        assert_eq!(e, run_policy(&policy, &s, &params).unwrap().utility);
        let mc = monte_carlo(&prior, &policy, &params, 5000, 3).unwrap();
        assert_eq!(mc.half_width, 0.0);
        assert_eq!(mc.mean, e.to_f64());
    }

    #[test]
    fn estimate_is_reproducible_and_merges_batches() {
        let a = estimate(10_000, 9, |rng| Ok(rand::Rng::random::<f64>(rng))).unwrap();
        let b = estimate(10_000, 9, |rng| Ok(rand::Rng::random::<f64>(rng))).unwrap();
        assert_eq!(a, b);
        assert!(a.covers(0.5, 4.0));
        assert!(estimate(0, 1, |_| Ok(0.0)).is_err());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs = [1.0, 4.0, 2.5, -3.0, 7.0, 0.5];
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..2].iter().for_each(|&x| a.push(x));
        xs[2..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-9);
    }
}
