use crate::error::{Error, Result};
use crate::model::{AgentParams, ProductPrior};
use crate::scalar::Scalar;

/// Threshold T on ‖v‖₁ plus the chance of also accepting values equal to T.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdRule<N> {
    pub threshold: N,
    pub atom_accept_prob: N,
}

/// Picks T and the tie-acceptance probability p so that the rule selects
/// with probability exactly α:
///
/// ```text
/// Pr[V* > T] + p·Pr[V* = T] = α
/// ```
///
/// T is the smallest support point of V* with Pr[V* > T] ≤ α.
pub fn threshold_from_alpha<N: Scalar>(prior: &ProductPrior<N>, alpha: &N) -> Result<ThresholdRule<N>> {
    if !alpha.is_positive_tol() || !N::one().tol_gt(alpha) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, 1), got {}",
            alpha.render()
        )));
    }
    let dist = prior.max_value_distribution();
    let mut above = N::one();
    for (value, mass) in &dist {
        above = above - mass.clone();
        if !above.tol_gt(alpha) {
            let p = (alpha.clone() - above) / mass.clone();
            let p = p.max_of(N::zero()).min_of(N::one());
            return Ok(ThresholdRule {
                threshold: value.clone(),
                atom_accept_prob: p,
            });
        }
    }
    unreachable!("Pr[V* > max] = 0 never exceeds alpha")
}

/// The two selection probabilities used by the offline guarantee:
/// (λk+1)/(2+λ) and k(1+λ)/(1+λ+k).
pub fn guarantee_alphas<N: Scalar>(params: &AgentParams<N>) -> Result<(N, N)> {
    if !N::one().tol_gt(&params.bias()) {
        return Err(Error::invalid(format!(
            "guarantee needs lambda*(k-1) < 1, got {}",
            params.bias().render()
        )));
    }
    let l = params.lambda().clone();
    let k = N::from_int(params.k() as i64);
    let one = N::one();
    let two = N::from_int(2);
    let a1 = (l.clone() * k.clone() + one.clone()) / (two + l.clone());
    let a2 = k.clone() * (one.clone() + l.clone()) / (one + l + k);
    Ok((a1, a2))
}
