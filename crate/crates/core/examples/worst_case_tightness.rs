//! The mixed worst-case prior pushes both ratios towards
//! (2+λ)/(1−β) and (1+λ)/(1−β) as ε shrinks.

use lap::analysis::ratio_report;
use lap::instances::{tightness_rows, worstcase_mixed};
use lap::model::AgentParams;
use lap::policies::DEFAULT_STATE_BUDGET;
use lap::{Rational, Scalar};

fn main() -> lap::Result<()> {
    let lambda = Rational::from_ratio(1, 2);
    let params = AgentParams::new(lambda.clone(), 2)?;
    let beta = params.bias();
    let one = Rational::from_int(1);
    let prophet_bound = (Rational::from_int(2) + lambda.clone()) / (one.clone() - beta.clone());
    let online_bound = (one.clone() + lambda.clone()) / (one - beta.clone());
    println!("bounds: prophet {} online {}", prophet_bound.to_f64(), online_bound.to_f64());

    for d in [5, 10, 20, 50, 100] {
        let eps = Rational::from_ratio(1, d);
        let w = tightness_rows(&beta, &eps)?;
        let prior = worstcase_mixed(w, 2, &lambda, &eps)?;
        let r = ratio_report(&prior, &params, DEFAULT_STATE_BUDGET)?;
        let (p, o) = (r.prophet_ratio.value().unwrap(), r.online_ratio.value().unwrap());
        println!("eps=1/{d:<4} w={w:<2} prophet {:.4}  online {:.4}", p.to_f64(), o.to_f64());
    }
    Ok(())
}
