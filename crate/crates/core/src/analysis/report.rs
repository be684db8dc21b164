use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::analysis::{RatioReport, RatioValue};
use crate::error::{Error, Result};
use crate::model::{AgentParams, Regime};
use crate::scalar::{Rational, Scalar};

/// Relative slack allowed when a re-imported row was written in float mode.
const REVALIDATE_TOLERANCE: f64 = 1e-9;

/// A failed inequality check with the instance that broke it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub check: String,
    pub lambda: String,
    pub k: usize,
    pub lhs: String,
    pub rhs: String,
    pub instance: serde_json::Value,
}

impl std::fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} fails at lambda={}, k={}: {} vs {}",
            self.check, self.lambda, self.k, self.lhs, self.rhs
        )
    }
}

/// One line of a ratio table. Numbers are rendered strings so exact
/// fractions survive CSV and JSON untouched; an undefined ratio is
/// `"undefined"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub lambda: String,
    pub k: usize,
    pub bias: String,
    pub n: usize,
    pub e_upr: String,
    pub e_ugr: String,
    pub e_ugb: String,
    pub prophet_ratio: String,
    pub online_ratio: String,
    pub regime: Regime,
    pub instance_id: String,
    pub seed: Option<u64>,
}

impl ReportRow {
    pub fn new<N: Scalar>(
        report: &RatioReport<N>,
        params: &AgentParams<N>,
        n: usize,
        instance_id: impl Into<String>,
        seed: Option<u64>,
    ) -> Self {
        ReportRow {
            lambda: params.lambda().render(),
            k: params.k(),
            bias: report.bias.render(),
            n,
            e_upr: report.e_prophet_rational.render(),
            e_ugr: report.e_gambler_rational_opt.render(),
            e_ugb: report.e_gambler_biased_opt.render(),
            prophet_ratio: report.prophet_ratio.render(),
            online_ratio: report.online_ratio.render(),
            regime: report.regime,
            instance_id: instance_id.into(),
            seed,
        }
    }

    /// Re-checks the row's internal consistency: the bias is λ(k−1), both
    /// ratios are the quotients of the listed expectations (or undefined
    /// exactly when E[U*_gb] ≤ 0), and the regime matches the bias.
    pub fn revalidate(&self) -> Result<()> {
        let lambda = num(&self.lambda, "lambda")?;
        let bias = num(&self.bias, "bias")?;
        let expected_bias = lambda * Rational::from_int(self.k as i64 - 1);
        if !close(&bias, &expected_bias) {
            return Err(mismatch("bias", &self.bias, &expected_bias));
        }
        let e_upr = num(&self.e_upr, "e_upr")?;
        let e_ugr = num(&self.e_ugr, "e_ugr")?;
        let e_ugb = num(&self.e_ugb, "e_ugb")?;
        for (name, text, numer) in [
            ("prophet_ratio", &self.prophet_ratio, &e_upr),
            ("online_ratio", &self.online_ratio, &e_ugr),
        ] {
            match RatioValue::of(numer, &e_ugb) {
                RatioValue::Value(expected) => {
                    let got = num(text, name)?;
                    if !close(&got, &expected) {
                        return Err(mismatch(name, text, &expected));
                    }
                }
                RatioValue::NonPositiveDenominator => {
                    if text != "undefined" {
                        return Err(Error::Parse(format!(
                            "{name} is {text} but E[U*_gb] = {} is not positive",
                            self.e_ugb
                        )));
                    }
                }
            }
        }
        let exact = match bias.cmp(&Rational::from_int(1)) {
            Ordering::Less => Regime::Subcritical,
            Ordering::Equal => Regime::Critical,
            Ordering::Greater => Regime::Supercritical,
        };
        let regime_ok = self.regime == exact
            || (self.regime == Regime::Critical && close(&bias, &Rational::from_int(1)));
        if !regime_ok {
            return Err(Error::Parse(format!(
                "regime {} does not match bias {}",
                self.regime, self.bias
            )));
        }
        Ok(())
    }
}

fn num(text: &str, field: &str) -> Result<Rational> {
    Rational::parse(text).map_err(|_| Error::Parse(format!("{field} is not a number: {text:?}")))
}

/// Exact equality, or a relative difference within the float-mode slack.
fn close(a: &Rational, b: &Rational) -> bool {
    if a == b {
        return true;
    }
    let (x, y) = (a.to_f64(), b.to_f64());
    (x - y).abs() <= REVALIDATE_TOLERANCE * x.abs().max(y.abs()).max(1.0)
}

fn mismatch(field: &str, got: &str, expected: &Rational) -> Error {
    Error::Parse(format!(
        "{field} is {got}, expected {}",
        expected.render()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::ratio_report;
    use crate::instances::alternating_geometric;
    use crate::model::ProductPrior;

    fn row() -> ReportRow {
        let q = |n, d| Rational::from_ratio(n, d);
        let s = alternating_geometric(6, 2, &q(2, 1)).unwrap();
        let params = AgentParams::new(q(2, 1), 2).unwrap();
        let r = ratio_report(&ProductPrior::deterministic(&s), &params, 1000).unwrap();
        ReportRow::new(&r, &params, 6, "alternating-geometric", None)
    }

    #[test]
    fn exact_row_round_trips_through_csv() {
        let row = row();
        assert_eq!(row.prophet_ratio, "4");
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&row).unwrap();
        let bytes = w.into_inner().unwrap();
        let mut r = csv::Reader::from_reader(bytes.as_slice());
        let back: ReportRow = r.deserialize().next().unwrap().unwrap();
        assert_eq!(back, row);
        back.revalidate().unwrap();
    }

    #[test]
    fn tampered_rows_are_caught() {
        let mut bad = row();
        bad.prophet_ratio = "5".into();
        assert!(bad.revalidate().is_err());
        let mut bad = row();
        bad.regime = Regime::Subcritical;
        assert!(bad.revalidate().is_err());
        let mut bad = row();
        bad.e_ugb = "0".into();
        assert!(bad.revalidate().is_err());
    }

    #[test]
    fn float_rows_pass_within_tolerance() {
        let mut row = row();
        row.e_upr = "0.1".into();
        row.e_ugb = "0.3".into();
        row.prophet_ratio = format!("{}", 0.1f64 / 0.3);
        row.online_ratio = format!("{}", 4.0f64 / 0.3);
        row.revalidate().unwrap();
    }
}
