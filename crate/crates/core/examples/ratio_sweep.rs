//! Writes a λ × k grid of exact ratio rows on the alternating-linear family
//! to stdout as CSV.

use lap::analysis::{ratio_report, ReportRow};
use lap::instances::alternating_linear;
use lap::model::{AgentParams, ProductPrior};
use lap::policies::DEFAULT_STATE_BUDGET;
use lap::{Rational, Scalar};

fn main() -> lap::Result<()> {
    let mut out = csv::Writer::from_writer(std::io::stdout());
    for num in 1..=6 {
        let lambda = Rational::from_ratio(num, 4);
        for k in 2..=4 {
            let n = 3 * k;
            let params = AgentParams::new(lambda.clone(), k)?;
            let prior = ProductPrior::deterministic(&alternating_linear(n, k)?);
            let report = ratio_report(&prior, &params, DEFAULT_STATE_BUDGET)?;
            let row = ReportRow::new(&report, &params, n, "alternating-linear", None);
            row.revalidate()?;
            out.serialize(row).expect("stdout is writable");
        }
    }
    out.flush().expect("stdout is writable");
    Ok(())
}
