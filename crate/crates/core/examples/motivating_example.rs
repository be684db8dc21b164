//! The two-dimensional sequence (1,0), (0,1), (2,0), (0,2), (4,0), (0,4)
//! with λ = 2. Each new candidate doubles the best value so far, yet the
//! loss-averse gambler never gains from waiting.

use lap::analysis::ratio_report;
use lap::instances::alternating_geometric;
use lap::model::{biased_gambler_utility, AgentParams, ProductPrior};
use lap::policies::DEFAULT_STATE_BUDGET;
use lap::{Rational, Scalar};

fn main() -> lap::Result<()> {
    let two = Rational::from_int(2);
    let params = AgentParams::new(two.clone(), 2)?;
    let sigma = alternating_geometric(6, 2, &two)?;

    println!("t  candidate  U_gb");
    for t in 1..=sigma.n() {
        let v = sigma.at(t)?;
        let u = biased_gambler_utility(&sigma, t, &params)?;
        let entries: Vec<String> = v.entries().iter().map(Scalar::render).collect();
        println!("{t}  ({})      {}", entries.join(","), u.render());
    }

    let report = ratio_report(&ProductPrior::deterministic(&sigma), &params, DEFAULT_STATE_BUDGET)?;
    println!();
    println!("E[V*]       = {}", report.e_prophet_rational.render());
    println!("E[U*_gb]    = {}", report.e_gambler_biased_opt.render());
    println!("prophet ratio = {}", report.prophet_ratio.render());
    println!("regime        = {:?}", report.regime);
    Ok(())
}
