//! Exact optimal rules for the biased and the rational gambler on one
//! small prior, in both numeric modes.

use lap::model::{AgentParams, FiniteDistribution, ProductPrior, ValueVector};
use lap::policies::{
    optimal_biased_policy, optimal_rational_policy, patience_compare, Policy, DEFAULT_STATE_BUDGET,
};
use lap::{Rational, Scalar};

fn step<N: Scalar>(pairs: &[(&[i64], (i64, i64))]) -> lap::Result<FiniteDistribution<N>> {
    let pairs = pairs
        .iter()
        .map(|(v, (a, b))| Ok((ValueVector::from_ints(v)?, N::from_int(*a) / N::from_int(*b))))
        .collect::<lap::Result<Vec<_>>>()?;
    FiniteDistribution::from_pairs(pairs)
}

fn prior<N: Scalar>() -> lap::Result<ProductPrior<N>> {
    ProductPrior::new(vec![
        step(&[(&[2, 0], (1, 1))])?,
        step(&[(&[0, 3], (1, 2)), (&[1, 1], (1, 2))])?,
        step(&[(&[4, 0], (1, 3)), (&[0, 1], (2, 3))])?,
    ])
}

fn solve<N: Scalar>(lambda: N) -> lap::Result<()> {
    let prior = prior::<N>()?;
    let params = AgentParams::new(lambda, 2)?;
    let biased = optimal_biased_policy(&prior, &params, true, DEFAULT_STATE_BUDGET)?;
    let rational = optimal_rational_policy(&prior)?;
    println!(
        "lambda {}: E[U*_gb] = {}, E[U*_gr] = {}",
        params.lambda().render(),
        biased.expected_utility.render(),
        rational.expected_utility.render()
    );
    let verdict = patience_compare(
        &Policy::optimal_rational(rational),
        &Policy::optimal_biased(biased.clone()),
        &prior,
        &params,
        DEFAULT_STATE_BUDGET,
    )?;
    println!("  rational rule at least as patient: {}", verdict.is_more_patient());
    Ok(())
}

fn main() -> lap::Result<()> {
    for (a, b) in [(0, 1), (1, 2), (2, 1)] {
        solve(Rational::from_ratio(a, b))?;
    }
    solve(0.5_f64)?;

    let prior = prior::<Rational>()?;
    let params = AgentParams::new(Rational::from_ratio(1, 2), 2)?;
    let dp = optimal_biased_policy(&prior, &params, true, DEFAULT_STATE_BUDGET)?;
    println!("{}", serde_json::to_string_pretty(&dp.to_json()).expect("serializable"));
    Ok(())
}
