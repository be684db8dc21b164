//! Sampled behaviour of the i.i.d. reduction: how often n draws reproduce
//! the source sequence after deduplication, and how often adjacent source
//! candidates first show up in the wrong order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProductPrior;
use crate::scalar::Scalar;

const BATCH: u64 = 4096;

/// A success count out of a number of trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn frequency(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.hits as f64 / self.trials as f64
        }
    }

    /// Binomial standard deviation of the frequency under success probability `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// True when the frequency is within `z` standard deviations of `p`.
    pub fn within(&self, p: f64, z: f64) -> bool {
        (self.frequency() - p).abs() <= z * self.sigma_at(p)
    }

    fn add(self, other: Proportion) -> Proportion {
        Proportion {
            hits: self.hits + other.hits,
            trials: self.trials + other.trials,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationSample {
    /// Trials whose deduplicated draw equals the source sequence.
    pub matched: Proportion,
    /// For each adjacent pair (i, i+1): among trials where either shows
    /// up, those where candidate i+1 shows up first.
    pub inversions: Vec<Proportion>,
    pub seed: u64,
}

/// Samples `trials` horizons from an i.i.d. prior whose atoms are listed in
/// source order, as built by the reduction.
pub fn sample_representation<N: Scalar>(
    prior: &ProductPrior<N>,
    trials: u64,
    seed: u64,
) -> Result<RepresentationSample> {
    if !prior.is_iid() {
        return Err(Error::invalid("representation sampling needs an i.i.d. prior"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let m = prior.steps()[0].len();
    let pairs = m.saturating_sub(1);
    let batches = trials.div_ceil(BATCH);
    let parts: Vec<(Proportion, Vec<Proportion>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BATCH.min(trials - b * BATCH);
            let mut matched = Proportion::default();
            let mut inv = vec![Proportion::default(); pairs];
            let mut first = vec![usize::MAX; m];
            for _ in 0..count {
                first.fill(usize::MAX);
                for (pos, i) in prior.sample_indices(&mut rng).into_iter().enumerate() {
                    if first[i] == usize::MAX {
                        first[i] = pos;
                    }
                }
                let ok = first.iter().all(|&f| f != usize::MAX)
                    && first.windows(2).all(|w| w[0] < w[1]);
                matched = matched.add(Proportion {
                    hits: ok as u64,
                    trials: 1,
                });
                for (i, slot) in inv.iter_mut().enumerate() {
                    let (a, c) = (first[i], first[i + 1]);
                    if a != usize::MAX || c != usize::MAX {
                        slot.trials += 1;
                        slot.hits += (c < a) as u64;
                    }
                }
            }
            (matched, inv)
        })
        .collect();
    let mut matched = Proportion::default();
    let mut inversions = vec![Proportion::default(); pairs];
    for (m_part, inv_part) in parts {
        matched = matched.add(m_part);
        for (acc, p) in inversions.iter_mut().zip(inv_part) {
            *acc = acc.add(p);
        }
    }
    Ok(RepresentationSample {
        matched,
        inversions,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{iid_from_sequence, representation_match_probability};
    use crate::model::Sequence;
    use crate::scalar::Rational;

    #[test]
    fn frequencies_track_exact_probabilities() {
        let s = Sequence::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        let x = Rational::from_ratio(1, 4);
        let prior = iid_from_sequence(&s, &x, 10).unwrap();
        let sample = sample_representation(&prior, 20_000, 5).unwrap();
        let probs: Vec<Rational> = prior.steps()[0].atoms().iter().map(|a| a.prob.clone()).collect();
        let p = representation_match_probability(&probs, 10).to_f64();
        assert!(sample.matched.within(p, 4.0));
        assert!(sample.inversions[0].within(0.2, 4.0));
        assert_eq!(sample, sample_representation(&prior, 20_000, 5).unwrap());
    }
}
