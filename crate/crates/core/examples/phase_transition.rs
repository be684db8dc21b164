//! Ratio growth on the alternating-geometric family as λ crosses the
//! critical value 1/(k−1).

use lap::analysis::ratio_report;
use lap::instances::alternating_geometric;
use lap::model::{AgentParams, ProductPrior};
use lap::policies::DEFAULT_STATE_BUDGET;
use lap::{Rational, Scalar};

fn main() -> lap::Result<()> {
    let k = 3;
    println!("lambda  beta   regime         ratio at n = k, 2k, 3k, 4k");
    for num in [1, 2, 3, 4, 6, 8] {
        let lambda = Rational::from_ratio(num, 4);
        let params = AgentParams::new(lambda.clone(), k)?;
        let beta = params.bias();
        let ratios = (1..=4)
            .map(|rows| {
                let sigma = alternating_geometric(rows * k, k, &beta)?;
                let r = ratio_report(&ProductPrior::deterministic(&sigma), &params, DEFAULT_STATE_BUDGET)?;
                Ok(r.prophet_ratio.render())
            })
            .collect::<lap::Result<Vec<_>>>()?;
        println!(
            "{:<7} {:<6} {:<14} {}",
            lambda.render(),
            beta.render(),
            format!("{:?}", params.regime()),
            ratios.join(", ")
        );
    }
    Ok(())
}
