//! Seeded generators of small exact priors for property sweeps.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{AgentParams, FiniteDistribution, ProductPrior, ValueVector};
use crate::scalar::{Rational, Scalar};

/// Shape limits for [`random_prior`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorShape {
    pub max_n: usize,
    pub max_atoms: usize,
    pub dims: Vec<usize>,
    /// Entries are drawn from 0..=max_entry.
    pub max_entry: i64,
    /// Atom weights are drawn from 1..=max_weight, then normalized.
    pub max_weight: i64,
}

impl Default for PriorShape {
    fn default() -> Self {
        PriorShape {
            max_n: 4,
            max_atoms: 3,
            dims: vec![1, 2, 3],
            max_entry: 4,
            max_weight: 4,
        }
    }
}

/// λ values 0, 1/8, …, 2 tried by the sweeps.
pub fn lambda_grid() -> Vec<Rational> {
    (0..=16).map(|i| Rational::from_ratio(i, 8)).collect()
}

/// A random product prior with independent steps. Every atom has at least
/// one positive entry and atoms within a step are distinct.
pub fn random_prior<R: Rng + ?Sized>(rng: &mut R, shape: &PriorShape) -> ProductPrior<Rational> {
    let k = shape.dims[rng.random_range(0..shape.dims.len())];
    let n = rng.random_range(1..=shape.max_n);
    random_prior_with(rng, shape, n, k)
}

/// Like [`random_prior`] with fixed horizon and dimension.
pub fn random_prior_with<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &PriorShape,
    n: usize,
    k: usize,
) -> ProductPrior<Rational> {
    let steps = (0..n).map(|_| random_step(rng, shape, k)).collect();
    ProductPrior::new(steps).expect("steps share k")
}

pub fn random_step<R: Rng + ?Sized>(rng: &mut R, shape: &PriorShape, k: usize) -> FiniteDistribution<Rational> {
    let atoms = rng.random_range(1..=shape.max_atoms);
    let mut values: Vec<ValueVector<Rational>> = Vec::with_capacity(atoms);
    while values.len() < atoms {
        let entries: Vec<i64> = (0..k).map(|_| rng.random_range(0..=shape.max_entry)).collect();
        if entries.iter().all(|&e| e == 0) {
            continue;
        }
        let v = ValueVector::from_ints(&entries).expect("non-negative");
        if !values.contains(&v) {
            values.push(v);
        }
    }
    let weights: Vec<i64> = (0..atoms).map(|_| rng.random_range(1..=shape.max_weight)).collect();
    let total: i64 = weights.iter().sum();
    FiniteDistribution::from_pairs(
        values
            .into_iter()
            .zip(weights)
            .map(|(v, w)| (v, Rational::from_ratio(w, total)))
            .collect(),
    )
    .expect("weights normalize to one")
}

/// `count` reproducible (prior, agent) pairs with λ(k−1) < 1, drawn from
/// [`lambda_grid`].
pub fn subcritical_instances(
    seed: u64,
    count: usize,
    shape: &PriorShape,
) -> Vec<(ProductPrior<Rational>, AgentParams<Rational>)> {
    subcritical_instances_from(seed, count, shape, &lambda_grid())
}

/// Like [`subcritical_instances`] with λ drawn from `lambdas`. Dimensions
/// for which no listed λ is subcritical are dropped from the shape.
pub fn subcritical_instances_from(
    seed: u64,
    count: usize,
    shape: &PriorShape,
    lambdas: &[Rational],
) -> Vec<(ProductPrior<Rational>, AgentParams<Rational>)> {
    let allowed = |k: usize| -> Vec<Rational> {
        lambdas
            .iter()
            .filter(|l| Rational::one() > (*l).clone() * Rational::from_int(k as i64 - 1))
            .cloned()
            .collect()
    };
    let shape = PriorShape {
        dims: shape.dims.iter().copied().filter(|&k| !allowed(k).is_empty()).collect(),
        ..shape.clone()
    };
    if shape.dims.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let prior = random_prior(&mut rng, &shape);
            let choices = allowed(prior.k());
            let lambda = choices[rng.random_range(0..choices.len())].clone();
            let params = AgentParams::new(lambda, prior.k()).expect("valid lambda");
            (prior, params)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_are_respected() {
        let shape = PriorShape::default();
        for (prior, params) in subcritical_instances(11, 50, &shape) {
            assert!(prior.n() <= 4 && shape.dims.contains(&prior.k()));
            assert!(prior.steps().iter().all(|s| s.len() <= 3));
            assert!(params.bias() < Rational::one());
            for step in prior.steps() {
                assert!(step.atoms().iter().all(|a| !a.value.is_zero()));
            }
        }
    }

    #[test]
    fn seeded_and_reproducible() {
        let shape = PriorShape::default();
        let a = subcritical_instances(5, 10, &shape);
        let b = subcritical_instances(5, 10, &shape);
        assert_eq!(a.len(), b.len());
        for ((pa, la), (pb, lb)) in a.iter().zip(&b) {
            assert_eq!(pa, pb);
            assert_eq!(la.lambda(), lb.lambda());
        }
    }

    #[test]
    fn lambda_list_restricts_dimensions() {
        let shape = PriorShape::default();
        let only = [Rational::from_ratio(3, 4)];
        let got = subcritical_instances_from(2, 30, &shape, &only);
        assert_eq!(got.len(), 30);
        assert!(got.iter().all(|(p, l)| p.k() <= 2 && *l.lambda() == only[0]));
        assert!(subcritical_instances_from(2, 5, &PriorShape { dims: vec![3], ..shape }, &only).is_empty());
    }
}
