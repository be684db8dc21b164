//! Compares exact expectations of threshold rules with seeded Monte Carlo
//! estimates.

use lap::analysis::random::{random_prior_with, PriorShape};
use lap::analysis::{exact_expectation, monte_carlo};
use lap::model::AgentParams;
use lap::policies::{guarantee_alphas, threshold_from_alpha, Policy, DEFAULT_STATE_BUDGET};
use lap::{Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lap::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let shape = PriorShape { max_entry: 9, ..PriorShape::default() };
    let prior = random_prior_with(&mut rng, &shape, 6, 2);
    let params = AgentParams::new(Rational::from_ratio(1, 3), 2)?;

    let (a1, a2) = guarantee_alphas(&params)?;
    for alpha in [a1, a2, Rational::from_ratio(1, 2)] {
        let rule = threshold_from_alpha(&prior, &alpha)?;
        let policy = Policy::threshold(rule.clone())?.with_seed(3);
        let exact = exact_expectation(&prior, &policy, &params, DEFAULT_STATE_BUDGET)?;
        let est = monte_carlo(&prior, &policy, &params, 200_000, 3)?;
        println!(
            "alpha {:<6} T={} p={:<5} exact {:.5}  mc {:.5} ± {:.5}",
            alpha.render(),
            rule.threshold.render(),
            rule.atom_accept_prob.render(),
            exact.to_f64(),
            est.mean,
            est.half_width
        );
    }
    Ok(())
}
