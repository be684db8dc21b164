//! Checks the offline guarantee of the threshold rule on a few random
//! subcritical priors and shows how much slack each instance has.

use lap::analysis::random::{subcritical_instances, PriorShape};
use lap::analysis::verify_prophet_bound;
use lap::policies::DEFAULT_STATE_BUDGET;
use lap::Scalar;

fn main() -> lap::Result<()> {
    for (i, (prior, params)) in subcritical_instances(11, 6, &PriorShape::default()).iter().enumerate() {
        let check = verify_prophet_bound(prior, params, DEFAULT_STATE_BUDGET)?;
        let floor = check.factor.clone() * check.e_v_star.clone();
        println!(
            "#{i} n={} k={} lambda={}: alphas ({}, {}), thresholds ({}, {})",
            prior.n(),
            params.k(),
            params.lambda().render(),
            check.alphas[0].render(),
            check.alphas[1].render(),
            check.rules[0].threshold.render(),
            check.rules[1].threshold.render(),
        );
        println!(
            "    best threshold value {} >= {} = factor {} x E[V*] {}",
            check.best_threshold.render(),
            floor.render(),
            check.factor.render(),
            check.e_v_star.render()
        );
    }
    Ok(())
}
