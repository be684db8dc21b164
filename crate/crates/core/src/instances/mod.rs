//! Adversarial and behavioral instance families, plus the reduction from a
//! deterministic sequence to an i.i.d. prior.
//!
//! Position t (1-based) in the rotating families puts its value on
//! dimension `(t − 1) mod k`, so rows of k consecutive candidates sweep the
//! dimensions in order.

mod reduction;

use crate::error::{Error, Result};
use crate::model::{AgentParams, FiniteDistribution, ProductPrior, Sequence, ValueVector};
use crate::scalar::Scalar;

pub use reduction::{
    growth_exponents, det_to_iid, iid_from_sequence, inversion_probability,
    representation_match_probability, representation_miss_bound, GrowthExponents, LogBase,
    ReductionMeta,
};

fn check_dims(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(Error::invalid(format!("need n ≥ 1 and k ≥ 1, got n={n}, k={k}")));
    }
    Ok(())
}

fn rotating<N: Scalar>(n: usize, k: usize, row_value: impl Fn(usize) -> N) -> Result<Sequence<N>> {
    check_dims(n, k)?;
    Sequence::new(
        (1..=n)
            .map(|t| ValueVector::axis(k, (t - 1) % k, row_value(t.div_ceil(k))))
            .collect::<Result<_>>()?,
    )
}

/// Row r carries β^(r−1).
pub fn alternating_geometric<N: Scalar>(n: usize, k: usize, beta: &N) -> Result<Sequence<N>> {
    if !beta.is_positive_tol() {
        return Err(Error::invalid("beta must be positive"));
    }
    rotating(n, k, |r| beta.powi(r as u32 - 1))
}

/// Row r carries r.
pub fn alternating_linear<N: Scalar>(n: usize, k: usize) -> Result<Sequence<N>> {
    rotating(n, k, |r| N::from_int(r as i64))
}

/// `w` rows of `k` candidates; row i (1-based) carries 1 + β + … + β^(i−1).
pub fn partial_sums<N: Scalar>(w: usize, k: usize, beta: &N) -> Result<Sequence<N>> {
    if beta.is_negative_tol() {
        return Err(Error::invalid("beta must be non-negative"));
    }
    rotating(w * k, k, |r| geometric_sum(beta, r))
}

/// 1 + β + … + β^(terms−1).
fn geometric_sum<N: Scalar>(beta: &N, terms: usize) -> N {
    (0..terms).fold(N::zero(), |acc, i| acc + beta.powi(i as u32))
}

/// The tight instance: [`partial_sums`] followed by one random candidate
/// worth (1−ε)(1+λ)·S/ε on the first dimension with probability ε and
/// zero otherwise, where S = Σ_{i<w} β^i and β = λ(k−1) < 1.
pub fn worstcase_mixed<N: Scalar>(
    w: usize,
    k: usize,
    lambda: &N,
    epsilon: &N,
) -> Result<ProductPrior<N>> {
    let params = AgentParams::new(lambda.clone(), k)?;
    if !N::one().tol_gt(&params.bias()) {
        return Err(Error::invalid(format!(
            "the tight instance needs lambda*(k-1) < 1, got {}",
            params.bias().render()
        )));
    }
    worstcase_mixed_unchecked(w, k, lambda, epsilon)
}

/// [`worstcase_mixed`] without the subcritical requirement, for sweeps
/// that cross the phase transition.
pub fn worstcase_mixed_unchecked<N: Scalar>(
    w: usize,
    k: usize,
    lambda: &N,
    epsilon: &N,
) -> Result<ProductPrior<N>> {
    if !epsilon.is_positive_tol() || !N::one().tol_gt(epsilon) {
        return Err(Error::invalid("epsilon must lie in (0, 1)"));
    }
    if w == 0 {
        return Err(Error::invalid("w must be positive"));
    }
    let params = AgentParams::new(lambda.clone(), k)?;
    let beta = params.bias();
    let head = partial_sums(w, k, &beta)?;
    let s = geometric_sum(&beta, w);
    let big = (N::one() - epsilon.clone()) * (N::one() + lambda.clone()) * s / epsilon.clone();
    let last = FiniteDistribution::from_pairs(vec![
        (ValueVector::axis(k, 0, big)?, epsilon.clone()),
        (ValueVector::zeros(k), N::one() - epsilon.clone()),
    ])?;
    ProductPrior::deterministic(&head).append(&[last])
}

/// Smallest w ≥ 1 with β^w ≤ ε, i.e. ⌈log_β ε⌉ for 0 < β < 1.
pub fn tightness_rows<N: Scalar>(beta: &N, epsilon: &N) -> Result<usize> {
    if !beta.is_positive_tol() || !N::one().tol_gt(beta) {
        return Err(Error::invalid("beta must lie in (0, 1)"));
    }
    if !epsilon.is_positive_tol() || !N::one().tol_gt(epsilon) {
        return Err(Error::invalid("epsilon must lie in (0, 1)"));
    }
    let mut w = 1;
    let mut power = beta.clone();
    while power.tol_gt(epsilon) {
        power = power * beta.clone();
        w += 1;
    }
    Ok(w)
}

/// k candidates, the i-th worth q on dimension i only.
pub fn identical_value<N: Scalar>(k: usize, q: &N) -> Result<Sequence<N>> {
    if !q.is_positive_tol() {
        return Err(Error::invalid("q must be positive"));
    }
    rotating(k, k, |_| q.clone())
}

/// k candidates, the i-th worth a everywhere plus a bonus q on dimension i.
pub fn salient_feature<N: Scalar>(k: usize, a: &N, q: &N) -> Result<Sequence<N>> {
    check_dims(k, k)?;
    if !a.is_positive_tol() {
        return Err(Error::invalid("a must be positive"));
    }
    if !q.tol_gt(&N::one()) {
        return Err(Error::invalid("q must exceed 1"));
    }
    Sequence::new(
        (0..k)
            .map(|i| {
                let mut e = vec![a.clone(); k];
                e[i] = a.clone() + q.clone();
                ValueVector::new(e)
            })
            .collect::<Result<_>>()?,
    )
}

/// (σ, σ') with σ' the identical-value family scaled up to q' = qk.
pub fn quality_pair<N: Scalar>(k: usize, q: &N) -> Result<(Sequence<N>, Sequence<N>)> {
    if k < 2 || !q.tol_gt(&N::one()) {
        return Err(Error::invalid("quality pair needs k > 1 and q > 1"));
    }
    let scaled = q.clone() * N::from_int(k as i64);
    Ok((identical_value(k, q)?, identical_value(k, &scaled)?))
}

/// (σ, σ') of length n with σ' point-wise dominating σ:
/// σ repeats the first unit vector and ends with 1+ε there; σ' rotates unit
/// vectors and ends with 1+β, β = λ(k−1). Needs 0 < ε < β and n ≥ k+1 so
/// that σ' has swept every dimension before its last candidate.
pub fn dominance_pair<N: Scalar>(
    k: usize,
    n: usize,
    lambda: &N,
    epsilon: &N,
) -> Result<(Sequence<N>, Sequence<N>)> {
    let beta = AgentParams::new(lambda.clone(), k)?.bias();
    if !epsilon.is_positive_tol() || !beta.tol_gt(epsilon) {
        return Err(Error::invalid(format!(
            "dominance pair needs 0 < epsilon < lambda*(k-1) = {}",
            beta.render()
        )));
    }
    if n < k + 1 {
        return Err(Error::invalid(format!("dominance pair needs n ≥ k+1 = {}", k + 1)));
    }
    let one = N::one();
    let mut low = vec![ValueVector::axis(k, 0, one.clone())?; n - 1];
    low.push(ValueVector::axis(k, 0, one.clone() + epsilon.clone())?);
    let mut high: Vec<_> = (1..n)
        .map(|t| ValueVector::axis(k, (t - 1) % k, one.clone()))
        .collect::<Result<_>>()?;
    high.push(ValueVector::axis(k, 0, one + beta)?);
    Ok((Sequence::new(low)?, Sequence::new(high)?))
}
