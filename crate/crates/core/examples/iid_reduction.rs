//! Turns a deterministic sequence into an i.i.d. prior whose draws, once
//! duplicates are dropped, reproduce the sequence with high probability.

use lap::analysis::sample_representation;
use lap::instances::{
    growth_exponents, det_to_iid, inversion_probability, representation_match_probability,
    representation_miss_bound, LogBase,
};
use lap::model::{AgentParams, Sequence};
use lap::policies::DEFAULT_STATE_BUDGET;
use lap::{Rational, Scalar};

fn main() -> lap::Result<()> {
    let sigma = Sequence::<Rational>::from_rows(&[&[2, 0], &[0, 3], &[3, 1]])?;
    let params = AgentParams::new(Rational::from_ratio(1, 4), 2)?;
    let eps = Rational::from_ratio(9, 10);

    for n in [50, 400, 1500] {
        let (prior, meta) = det_to_iid(&sigma, &params, &eps, Some(n), DEFAULT_STATE_BUDGET, LogBase::Natural)?;
        let probs: Vec<f64> = prior.steps()[0].atoms().iter().map(|a| a.prob.to_f64()).collect();
        if n == 50 {
            println!("m = {}, x = {}, atoms {:.5?}", meta.m, meta.x.render(), probs);
            println!("inversion probability per adjacent pair {:.5}", inversion_probability(&meta.x).to_f64());
        }
        let exact = representation_match_probability(&probs, n);
        let bound = representation_miss_bound(meta.m, meta.x.to_f64(), n);
        let sample = sample_representation(&prior, 20_000, 1)?;
        let inversions: Vec<String> = sample.inversions.iter().map(|p| format!("{:.4}", p.frequency())).collect();
        println!(
            "n = {n:<5} match {:.4} (sampled {:.4}), miss <= {:.4}, inversions [{}]",
            exact,
            sample.matched.frequency(),
            bound.min(1.0),
            inversions.join(", ")
        );
    }

    let exps = growth_exponents(2.0, 3, 1e6_f64.ln(), LogBase::Natural)?;
    println!("growth exponents at n = 10^6, lambda 2, k 3: {:.3} and {:.3}", exps.variant_a, exps.variant_b);
    Ok(())
}
