//! Pointwise utilities of the four agents.
//!
//! A biased agent compares the chosen candidate against a reference point
//! built feature by feature (the super candidate) and loses λ per unit of
//! shortfall:
//!
//! ```text
//! U = ‖v‖₁ − λ·(‖s‖₁ − ‖v‖₁)
//! ```
//!
//! The gambler's reference is the super candidate of what it has seen so
//! far; the prophet's is built from the whole sequence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Sequence, ValueVector};
use crate::scalar::Scalar;

/// Where the feature-amplified bias λ·(k−1) sits relative to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subcritical" => Ok(Regime::Subcritical),
            "critical" => Ok(Regime::Critical),
            "supercritical" => Ok(Regime::Supercritical),
            other => Err(Error::Parse(format!("unknown regime {other:?}"))),
        }
    }
}

/// Loss aversion λ and feature count k of a biased agent.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentParams<N> {
    lambda: N,
    k: usize,
}

impl<N: Scalar> AgentParams<N> {
    pub fn new(lambda: N, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        if !lambda.is_finite() || lambda.is_negative_tol() {
            return Err(Error::invalid(format!(
                "loss aversion must be finite and non-negative, got {}",
                lambda.render()
            )));
        }
        Ok(AgentParams { lambda, k })
    }

    pub fn lambda(&self) -> &N {
        &self.lambda
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Feature-amplified bias λ·(k−1).
    pub fn bias(&self) -> N {
        self.lambda.clone() * N::from_int(self.k as i64 - 1)
    }

    pub fn regime(&self) -> Regime {
        match self.bias().tol_cmp(&N::one()) {
            std::cmp::Ordering::Less => Regime::Subcritical,
            std::cmp::Ordering::Equal => Regime::Critical,
            std::cmp::Ordering::Greater => Regime::Supercritical,
        }
    }

    pub fn with_lambda(&self, lambda: N) -> Result<Self> {
        Self::new(lambda, self.k)
    }

    pub(crate) fn check_sequence(&self, sigma: &Sequence<N>) -> Result<()> {
        if sigma.k() != self.k {
            return Err(Error::invalid(format!(
                "agent has k={}, sequence has k={}",
                self.k,
                sigma.k()
            )));
        }
        Ok(())
    }
}

/// Which candidate a rule ended up with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// 1-based position.
    At(usize),
    NoSelection,
}

impl Selection {
    /// Stopping time with `NoSelection` placed after the last step.
    pub fn stop_time(self, n: usize) -> usize {
        match self {
            Selection::At(t) => t,
            Selection::NoSelection => n + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StoppingOutcome<N> {
    pub selection: Selection,
    pub utility: N,
    /// ‖σ⁽ᵗ⁾‖₁ of the chosen candidate, zero for `NoSelection`.
    pub value: N,
}

/// ‖v‖₁ − λ(‖s‖₁ − ‖v‖₁) for an explicit reference point.
pub fn utility_against<N: Scalar>(value: &ValueVector<N>, reference: &ValueVector<N>, lambda: &N) -> N {
    let v = value.l1();
    v.clone() - lambda.clone() * (reference.l1() - v)
}

/// U_{g_b}(σ, t): reference is the super candidate of the first `t` candidates.
pub fn biased_gambler_utility<N: Scalar>(
    sigma: &Sequence<N>,
    t: usize,
    params: &AgentParams<N>,
) -> Result<N> {
    params.check_sequence(sigma)?;
    sigma.check_step(t)?;
    let reference = crate::model::super_candidate(&sigma.candidates()[..t])?;
    Ok(utility_against(&sigma.candidates()[t - 1], &reference, params.lambda()))
}

/// U_{p_b}(σ, t): reference is the super candidate of the whole sequence.
pub fn biased_prophet_utility<N: Scalar>(
    sigma: &Sequence<N>,
    t: usize,
    params: &AgentParams<N>,
) -> Result<N> {
    params.check_sequence(sigma)?;
    sigma.check_step(t)?;
    let reference = crate::model::super_candidate(sigma.candidates())?;
    Ok(utility_against(&sigma.candidates()[t - 1], &reference, params.lambda()))
}

/// U_{p_r}(σ, t) = U_{g_r}(σ, t) = ‖σ⁽ᵗ⁾‖₁.
pub fn rational_utility<N: Scalar>(sigma: &Sequence<N>, t: usize) -> Result<N> {
    Ok(sigma.at(t)?.l1())
}

/// Utility of declining every candidate: a zero-valued pick judged against
/// the final super candidate, −λ‖s⁽ⁿ⁾‖₁.
pub fn no_selection_utility<N: Scalar>(sigma: &Sequence<N>, params: &AgentParams<N>) -> N {
    let reference = crate::model::super_candidate(sigma.candidates()).expect("non-empty");
    -(params.lambda().clone() * reference.l1())
}

/// U_{p_r}(σ) = maxₜ ‖σ⁽ᵗ⁾‖₁.
pub fn rational_prophet_value<N: Scalar>(sigma: &Sequence<N>) -> N {
    sigma
        .values()
        .into_iter()
        .reduce(Scalar::max_of)
        .expect("non-empty")
}

/// Best pick in hindsight for the biased gambler. Ties go to the smallest
/// index, and a pick beats `NoSelection` on ties.
pub fn offline_optimal_biased<N: Scalar>(
    sigma: &Sequence<N>,
    params: &AgentParams<N>,
    allow_no_selection: bool,
) -> Result<StoppingOutcome<N>> {
    params.check_sequence(sigma)?;
    let supers = sigma.running_super();
    let mut best: Option<StoppingOutcome<N>> = None;
    for (i, (c, s)) in sigma.candidates().iter().zip(&supers).enumerate() {
        let u = utility_against(c, s, params.lambda());
        if best.as_ref().is_none_or(|b| u.tol_gt(&b.utility)) {
            best = Some(StoppingOutcome {
                selection: Selection::At(i + 1),
                utility: u,
                value: c.l1(),
            });
        }
    }
    let mut best = best.expect("non-empty");
    if allow_no_selection {
        let none = no_selection_utility(sigma, params);
        if none.tol_gt(&best.utility) {
            best = StoppingOutcome {
                selection: Selection::NoSelection,
                utility: none,
                value: N::zero(),
            };
        }
    }
    Ok(best)
}

/// Best pick for the biased prophet, U_{p_b}(σ) = maxₜ U_{p_b}(σ, t).
pub fn offline_optimal_prophet<N: Scalar>(
    sigma: &Sequence<N>,
    params: &AgentParams<N>,
) -> Result<StoppingOutcome<N>> {
    params.check_sequence(sigma)?;
    let reference = crate::model::super_candidate(sigma.candidates())?;
    let mut best: Option<StoppingOutcome<N>> = None;
    for (i, c) in sigma.candidates().iter().enumerate() {
        let u = utility_against(c, &reference, params.lambda());
        if best.as_ref().is_none_or(|b| u.tol_gt(&b.utility)) {
            best = Some(StoppingOutcome {
                selection: Selection::At(i + 1),
                utility: u,
                value: c.l1(),
            });
        }
    }
    Ok(best.expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn params(lambda: Rational, k: usize) -> AgentParams<Rational> {
        AgentParams::new(lambda, k).unwrap()
    }

    fn motivating() -> Sequence<Rational> {
        Sequence::from_rows(&[&[1, 0], &[0, 1], &[2, 0], &[0, 2], &[4, 0], &[0, 4]]).unwrap()
    }

    #[test]
    fn gambler_utility_examples() {
        let p = params(q(2, 1), 2);
        assert_eq!(biased_gambler_utility(&motivating(), 5, &p).unwrap(), q(0, 1));
        assert_eq!(biased_gambler_utility(&motivating(), 1, &p).unwrap(), q(1, 1));
        let s = Sequence::<Rational>::from_rows(&[&[3, 0], &[0, 2], &[4, 3]]).unwrap();
        let p = params(q(1, 2), 2);
        assert_eq!(biased_gambler_utility(&s, 3, &p).unwrap(), q(7, 1));
        assert!(biased_gambler_utility(&s, 0, &p).is_err());
        assert!(biased_gambler_utility(&s, 4, &p).is_err());
    }

    #[test]
    fn prophet_utility_examples() {
        let s = Sequence::<Rational>::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(biased_prophet_utility(&s, 1, &params(q(1, 1), 2)).unwrap(), q(0, 1));
        assert_eq!(biased_prophet_utility(&s, 1, &params(q(0, 1), 2)).unwrap(), q(1, 1));
        let s = Sequence::<Rational>::from_rows(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]).unwrap();
        for t in 1..=3 {
            assert_eq!(biased_prophet_utility(&s, t, &params(q(1, 1), 3)).unwrap(), q(-2, 1));
        }
    }

    #[test]
    fn rational_and_no_selection() {
        let s = Sequence::<Rational>::from_rows(&[&[4, 3], &[0, 0]]).unwrap();
        assert_eq!(rational_utility(&s, 1).unwrap(), q(7, 1));
        assert_eq!(rational_utility(&s, 2).unwrap(), q(0, 1));
        assert_eq!(rational_utility(&motivating(), 6).unwrap(), q(4, 1));
        let s = Sequence::<Rational>::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(no_selection_utility(&s, &params(q(2, 1), 2)), q(-4, 1));
        assert_eq!(no_selection_utility(&s, &params(q(0, 1), 2)), q(0, 1));
    }

    #[test]
    fn offline_optimum_takes_first_on_motivating_example() {
        let out = offline_optimal_biased(&motivating(), &params(q(2, 1), 2), true).unwrap();
        assert_eq!(out.selection, Selection::At(1));
        assert_eq!(out.utility, q(1, 1));
        let single = Sequence::<Rational>::from_rows(&[&[3, 1]]).unwrap();
        let out = offline_optimal_biased(&single, &params(q(5, 1), 2), true).unwrap();
        assert_eq!(out.selection, Selection::At(1));
    }

    #[test]
    fn mismatched_k_is_rejected() {
        assert!(biased_gambler_utility(&motivating(), 1, &params(q(1, 1), 3)).is_err());
    }

    #[test]
    fn regime_classification() {
        assert_eq!(params(q(1, 2), 2).regime(), Regime::Subcritical);
        assert_eq!(params(q(1, 1), 2).regime(), Regime::Critical);
        assert_eq!(params(q(2, 1), 2).regime(), Regime::Supercritical);
        assert_eq!(params(q(9, 1), 1).bias(), q(0, 1));
        assert!(AgentParams::new(q(-1, 1), 2).is_err());
    }
}
