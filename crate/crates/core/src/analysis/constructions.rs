//! Exact replay of the closed-form utilities of every deterministic
//! construction over a small parameter grid.

use serde::Serialize;

use crate::analysis::behavior::{detect_quality_paradox, Agent, achievable_utility};
use crate::analysis::ratio::ratio_report;
use crate::error::Result;
use crate::instances::{
    alternating_geometric, alternating_linear, dominance_pair, identical_value, quality_pair,
    salient_feature,
};
use crate::model::{
    biased_gambler_utility, biased_prophet_utility, AgentParams, ProductPrior,
};
use crate::scalar::{Rational, Scalar};

/// Outcome of one family of identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionCheck {
    pub name: &'static str,
    pub cases: usize,
    /// Descriptions of the cases that did not reproduce exactly.
    pub failures: Vec<String>,
}

impl ConstructionCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    check: ConstructionCheck,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            check: ConstructionCheck {
                name,
                cases: 0,
                failures: Vec::new(),
            },
        }
    }

    fn expect(&mut self, got: &Rational, want: &Rational, what: impl FnOnce() -> String) {
        self.check.cases += 1;
        if got != want {
            self.check
                .failures
                .push(format!("{}: got {}, want {}", what(), got.render(), want.render()));
        }
    }

    fn expect_true(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.check.cases += 1;
        if !ok {
            self.check.failures.push(what());
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Runs every family and returns one entry per family.
pub fn construction_checks(budget: u64) -> Result<Vec<ConstructionCheck>> {
    Ok(vec![
        motivating(budget)?,
        geometric(budget)?,
        linear(budget)?,
        identical()?,
        salient()?,
        quality()?,
        dominance()?,
    ])
}

fn motivating(budget: u64) -> Result<ConstructionCheck> {
    let mut t = Tally::new("motivating example");
    let params = AgentParams::new(q(2, 1), 2)?;
    for n in [2usize, 4, 6, 8, 10] {
        let s = alternating_geometric(n, 2, &q(2, 1))?;
        let r = ratio_report(&ProductPrior::deterministic(&s), &params, budget)?;
        let want = q(2, 1).powi(n as u32 / 2 - 1);
        t.expect(&r.e_gambler_biased_opt, &q(1, 1), || format!("E[U*_gb] at n={n}"));
        for (name, ratio) in [("prophet", &r.prophet_ratio), ("online", &r.online_ratio)] {
            let got = ratio.value().cloned().unwrap_or_else(|| q(-1, 1));
            t.expect(&got, &want, || format!("{name} ratio at n={n}"));
        }
        if n >= 6 {
            let u = biased_gambler_utility(&s, 5, &params)?;
            t.expect(&u, &q(0, 1), || format!("pick (4,0) at n={n}"));
        }
    }
    Ok(t.check)
}

fn geometric(budget: u64) -> Result<ConstructionCheck> {
    let mut t = Tally::new("geometric family above the threshold");
    for k in [2usize, 3, 4] {
        for beta in [q(3, 2), q(2, 1), q(3, 1)] {
            let lambda = beta.clone() / q(k as i64 - 1, 1);
            let params = AgentParams::new(lambda, k)?;
            let mut last = q(0, 1);
            for rows in 1..=3usize {
                let n = rows * k;
                let s = alternating_geometric(n, k, &beta)?;
                let r = ratio_report(&ProductPrior::deterministic(&s), &params, budget)?;
                let got = r.prophet_ratio.value().cloned().unwrap_or_else(|| q(-1, 1));
                let want = beta.powi(rows as u32 - 1);
                t.expect(&got, &want, || format!("ratio k={k} beta={} n={n}", beta.render()));
                if rows > 1 {
                    t.expect_true(got > last, || format!("growth k={k} n={n}"));
                }
                last = got;
                for row in 2..=rows {
                    let u = biased_gambler_utility(&s, (row - 1) * k + 1, &params)?;
                    t.expect(&u, &q(0, 1), || format!("row {row} first pick k={k}"));
                }
            }
        }
    }
    Ok(t.check)
}

fn linear(budget: u64) -> Result<ConstructionCheck> {
    let mut t = Tally::new("linear family at the threshold");
    for k in [2usize, 3, 4] {
        let params = AgentParams::new(q(1, k as i64 - 1), k)?;
        for n in 1..=3 * k {
            let s = alternating_linear(n, k)?;
            let r = ratio_report(&ProductPrior::deterministic(&s), &params, budget)?;
            let got = r.prophet_ratio.value().cloned().unwrap_or_else(|| q(-1, 1));
            t.expect(&got, &q(n.div_ceil(k) as i64, 1), || format!("ratio k={k} n={n}"));
            for first in (1..=n).step_by(k) {
                let u = biased_gambler_utility(&s, first, &params)?;
                t.expect(&u, &q(1, 1), || format!("row-first pick t={first} k={k}"));
            }
        }
    }
    Ok(t.check)
}

fn grid() -> Vec<(usize, Rational)> {
    let mut out = Vec::new();
    for k in [1usize, 2, 3, 4] {
        for lambda in [q(0, 1), q(1, 3), q(1, 2), q(1, 1), q(2, 1)] {
            out.push((k, lambda));
        }
    }
    out
}

fn identical() -> Result<ConstructionCheck> {
    let mut t = Tally::new("identical-value family");
    for (k, lambda) in grid() {
        let params = AgentParams::new(lambda.clone(), k)?;
        for qv in [q(1, 1), q(2, 1), q(7, 2)] {
            let s = identical_value(k, &qv)?;
            let prophet = qv.clone() * (q(1, 1) - params.bias());
            for step in 1..=k {
                t.expect(&biased_prophet_utility(&s, step, &params)?, &prophet, || {
                    format!("prophet k={k} t={step}")
                });
                let gambler = qv.clone() * (q(1, 1) - lambda.clone() * q(step as i64 - 1, 1));
                t.expect(&biased_gambler_utility(&s, step, &params)?, &gambler, || {
                    format!("gambler k={k} t={step}")
                });
            }
        }
    }
    Ok(t.check)
}

/// The prophet form ak + q(1−λ(k−1)) is reproduced for every pick. For the
/// gambler, stopping at r sees ‖σ⁽ʳ⁾‖₁ = ak + q, not ar + q, so the model
/// value is ak + q(1−λ(r−1)). The shortcut form ar + q(1−λ(r−1)) is checked
/// where it coincides (r = k), and the gap a(k−r) is checked elsewhere.
fn salient() -> Result<ConstructionCheck> {
    let mut t = Tally::new("salient-feature family");
    for (k, lambda) in grid() {
        let params = AgentParams::new(lambda.clone(), k)?;
        for a in [q(1, 1), q(3, 2)] {
            for qv in [q(2, 1), q(5, 1)] {
                let s = salient_feature(k, &a, &qv)?;
                let kk = q(k as i64, 1);
                let prophet = a.clone() * kk.clone() + qv.clone() * (q(1, 1) - params.bias());
                for r in 1..=k {
                    t.expect(&biased_prophet_utility(&s, r, &params)?, &prophet, || {
                        format!("prophet k={k} r={r}")
                    });
                    let rr = q(r as i64, 1);
                    let tail = qv.clone() * (q(1, 1) - lambda.clone() * (rr.clone() - q(1, 1)));
                    let got = biased_gambler_utility(&s, r, &params)?;
                    t.expect(&got, &(a.clone() * kk.clone() + tail.clone()), || {
                        format!("gambler model value k={k} r={r}")
                    });
                    let shortcut = a.clone() * rr + tail;
                    if r == k {
                        t.expect(&got, &shortcut, || format!("gambler shortcut form k={k} r=k"));
                    } else {
                        t.expect(&(got - shortcut), &(a.clone() * q((k - r) as i64, 1)), || {
                            format!("gambler gap k={k} r={r}")
                        });
                    }
                }
            }
        }
    }
    Ok(t.check)
}

fn quality() -> Result<ConstructionCheck> {
    let mut t = Tally::new("quality pairs");
    for k in [2usize, 3, 4] {
        for lambda in [q(0, 1), q(1, 4), q(1, 2), q(1, 1), q(3, 2), q(2, 1)] {
            let params = AgentParams::new(lambda, k)?;
            for qv in [q(2, 1), q(3, 1)] {
                let (low, high) = quality_pair(k, &qv)?;
                let r = detect_quality_paradox(&low, &high, &params)?;
                t.expect_true(r.gambler_better_on_b, || format!("gambler k={k}"));
                let paradox_expected = params.bias() > q(1, 1);
                t.expect_true(r.prophet_worse_on_b == paradox_expected, || {
                    format!("prophet paradox k={k} bias={}", params.bias().render())
                });
            }
        }
    }
    Ok(t.check)
}

fn dominance() -> Result<ConstructionCheck> {
    let mut t = Tally::new("dominance pairs");
    for k in [2usize, 3] {
        for (lambda, eps) in [(q(1, 1), q(1, 2)), (q(2, 1), q(1, 4)), (q(3, 2), q(1, 1))] {
            let params = AgentParams::new(lambda.clone(), k)?;
            if !(params.bias() > eps) {
                continue;
            }
            for n in [k + 1, k + 3] {
                let (low, high) = dominance_pair(k, n, &lambda, &eps)?;
                let one_eps = q(1, 1) + eps.clone();
                for (agent, name) in [(Agent::Gambler, "gambler"), (Agent::Prophet, "prophet")] {
                    t.expect(&achievable_utility(&low, &params, agent)?, &one_eps, || {
                        format!("{name} on dominated k={k} n={n}")
                    });
                    t.expect(&achievable_utility(&high, &params, agent)?, &q(1, 1), || {
                        format!("{name} on dominating k={k} n={n}")
                    });
                }
            }
        }
    }
    Ok(t.check)
}
