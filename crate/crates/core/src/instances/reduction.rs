//! From a deterministic succinct sequence σ of length m to an i.i.d. prior
//! whose draws reproduce σ after deduplication with high probability.
//!
//! Each draw is σᵢ with probability x^(i−1)(1−x)/(1−x^m). With
//! α = log_m(U_pr(σ)/(ε·U_gb(σ))) + 2 and x = m^(−α), which simplifies to
//! x = ε·U_gb(σ)/(U_pr(σ)·m²), the nominal horizon is
//! n = m^(α(m−1))·(log m)^α.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    is_succinct, offline_optimal_biased, rational_prophet_value, AgentParams, FiniteDistribution,
    ProductPrior, Sequence,
};
use crate::scalar::Scalar;

/// Base of the logarithm in the nominal horizon.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionMeta<N> {
    pub m: usize,
    pub x: N,
    pub alpha_exp: f64,
    /// ⌈m^(α(m−1))·(log m)^α⌉; astronomically large in general.
    pub nominal_n: BigUint,
    /// Natural log of the unrounded nominal horizon.
    pub ln_nominal_n: f64,
    pub epsilon: N,
    pub log_base: LogBase,
    /// Horizon of the returned prior.
    pub n: usize,
}

/// Builds the i.i.d. prior. Without `n_override` the nominal horizon is
/// used when it fits in `budget` steps, otherwise `ResourceLimit` reports it.
pub fn det_to_iid<N: Scalar>(
    sigma: &Sequence<N>,
    params: &AgentParams<N>,
    epsilon: &N,
    n_override: Option<usize>,
    budget: u64,
    log_base: LogBase,
) -> Result<(ProductPrior<N>, ReductionMeta<N>)> {
    if !is_succinct(sigma) {
        return Err(Error::invalid("the reduction needs a succinct sequence"));
    }
    let m = sigma.n();
    if m < 2 {
        return Err(Error::invalid("the reduction needs at least two candidates"));
    }
    if !epsilon.is_positive_tol() || !N::one().tol_gt(epsilon) {
        return Err(Error::invalid("epsilon must lie in (0, 1)"));
    }
    let u_gb = offline_optimal_biased(sigma, params, false)?.utility;
    if !u_gb.is_positive_tol() {
        return Err(Error::invalid(format!(
            "the reduction needs a positive biased utility, got {}",
            u_gb.render()
        )));
    }
    let u_pr = rational_prophet_value(sigma);
    let mf = m as f64;
    let alpha_exp = (u_pr.to_f64() / (epsilon.to_f64() * u_gb.to_f64())).ln() / mf.ln() + 2.0;
    let m_sq = N::from_int((m * m) as i64);
    let x = epsilon.clone() * u_gb / (u_pr * m_sq);

    let ln_nominal_n = alpha_exp * (mf - 1.0) * mf.ln() + alpha_exp * log_base.log(mf).ln();
    let nominal_n = ceil_exp(ln_nominal_n);
    let n = match n_override {
        Some(0) => return Err(Error::invalid("n_override must be positive")),
        Some(n) => n,
        None => {
            if nominal_n > BigUint::from(budget) {
                return Err(Error::limit("i.i.d. reduction horizon", nominal_n, budget));
            }
            nominal_n.to_usize().expect("within budget")
        }
    };
    let prior = iid_from_sequence(sigma, &x, n)?;
    Ok((
        prior,
        ReductionMeta {
            m,
            x,
            alpha_exp,
            nominal_n,
            ln_nominal_n,
            epsilon: epsilon.clone(),
            log_base,
            n,
        },
    ))
}

/// ⌈e^L⌉ as a big integer, exact up to f64 precision in the leading bits.
fn ceil_exp(ln_value: f64) -> BigUint {
    if ln_value < 36.0 {
        return BigUint::from(ln_value.exp().ceil().max(1.0) as u64);
    }
    let bits = ln_value / std::f64::consts::LN_2;
    let shift = bits.floor() - 52.0;
    let mantissa = (bits - shift).exp2().ceil() as u64;
    BigUint::from(mantissa) << (shift as u64)
}

/// i.i.d. prior over the candidates of `sigma` with geometric weights
/// x^(i−1)(1−x)/(1−x^m).
pub fn iid_from_sequence<N: Scalar>(sigma: &Sequence<N>, x: &N, n: usize) -> Result<ProductPrior<N>> {
    if !is_succinct(sigma) {
        return Err(Error::invalid("the reduction needs a succinct sequence"));
    }
    if !x.is_positive_tol() || !N::one().tol_gt(x) {
        return Err(Error::invalid("x must lie in (0, 1)"));
    }
    let m = sigma.n();
    let norm = (N::one() - x.clone()) / (N::one() - x.powi(m as u32));
    let pairs = sigma
        .candidates()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), x.powi(i as u32) * norm.clone()))
        .collect();
    ProductPrior::iid(FiniteDistribution::from_pairs(pairs)?, n)
}

/// Exact Pr[r(σ̃) = σ] for n i.i.d. draws with atom probabilities `probs`
/// listed in σ's order: every atom must appear, first occurrences in order.
pub fn representation_match_probability<N: Scalar>(probs: &[N], n: usize) -> N {
    let m = probs.len();
    let mut prefix = vec![N::zero(); m + 1];
    for (i, p) in probs.iter().enumerate() {
        prefix[i + 1] = prefix[i].clone() + p.clone();
    }
    // seen[j]: probability that exactly σ₁..σⱼ have appeared, in order
    let mut seen = vec![N::zero(); m + 1];
    seen[0] = N::one();
    for _ in 0..n {
        let mut next = vec![N::zero(); m + 1];
        for j in 0..=m {
            if seen[j].is_zero() {
                continue;
            }
            next[j] = next[j].clone() + seen[j].clone() * prefix[j].clone();
            if j < m {
                next[j + 1] = next[j + 1].clone() + seen[j].clone() * probs[j].clone();
            }
        }
        seen = next;
    }
    seen[m].clone()
}

/// Union bound on Pr[r(σ̃) ≠ σ]: m(1−pₘ)^n + (m−1)·x/(1+x), where
/// pₘ = x^(m−1)(1−x)/(1−x^m) is the smallest atom probability. The cruder
/// (1−x^(m−1))^n is smaller than (1−pₘ)^n and does not bound the miss term.
pub fn representation_miss_bound(m: usize, x: f64, n: usize) -> f64 {
    let mf = m as f64;
    let p_min = x.powi(m as i32 - 1) * (1.0 - x) / (1.0 - x.powi(m as i32));
    mf * (1.0 - p_min).powi(n as i32) + (mf - 1.0) * x / (1.0 + x)
}

/// Pr[σᵢ₊₁ shows up before σᵢ | both show up] = x/(1+x).
pub fn inversion_probability<N: Scalar>(x: &N) -> N {
    x.clone() / (N::one() + x.clone())
}

/// Two readings of the i.i.d. growth exponent, evaluated at a
/// horizon with natural log `ln_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthExponents {
    /// (1/√(2k))·√(log n)·min(1/√(log β), 1/(2√k)) − 1
    pub variant_a: f64,
    /// f(λ,k)·√(log n) with f = (1/√(2k))·min(1/√(log β), 1/(2√k)) − 1
    pub variant_b: f64,
}

pub fn growth_exponents(lambda: f64, k: usize, ln_n: f64, base: LogBase) -> Result<GrowthExponents> {
    let beta = lambda * (k as f64 - 1.0);
    if beta <= 1.0 {
        return Err(Error::invalid("the growth exponent needs lambda*(k-1) > 1"));
    }
    if ln_n <= 0.0 {
        return Err(Error::invalid("the growth exponent needs n > 1"));
    }
    let to_base = |ln: f64| match base {
        LogBase::Natural => ln,
        LogBase::Two => ln / std::f64::consts::LN_2,
    };
    let kf = k as f64;
    let inner = (1.0 / to_base(beta.ln()).sqrt()).min(1.0 / (2.0 * kf.sqrt()));
    let root = to_base(ln_n).sqrt();
    let scale = 1.0 / (2.0 * kf).sqrt();
    Ok(GrowthExponents {
        variant_a: scale * root * inner - 1.0,
        variant_b: (scale * inner - 1.0) * root,
    })
}
