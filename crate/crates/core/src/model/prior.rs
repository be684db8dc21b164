use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Sequence, ValueVector};
use crate::scalar::{Mode, Scalar};

/// Tolerance on Σp = 1 in float mode.
const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<N> {
    pub value: ValueVector<N>,
    pub prob: N,
}

/// Finite-support distribution over value vectors of one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<N> {
    atoms: Vec<Atom<N>>,
    cumulative: Vec<f64>,
}

impl<N: Scalar> FiniteDistribution<N> {
    pub fn new(atoms: Vec<Atom<N>>) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::invalid("distribution needs at least one atom"))?;
        let k = first.value.k();
        let mut total = N::zero();
        for (i, atom) in atoms.iter().enumerate() {
            atom.value.check_k(k)?;
            if !atom.prob.is_positive_tol() {
                return Err(Error::invalid(format!(
                    "atom {i} has non-positive probability {}",
                    atom.prob.render()
                )));
            }
            if atoms[..i].iter().any(|a| a.value == atom.value) {
                return Err(Error::invalid(format!(
                    "duplicate support point {}",
                    atom.value
                )));
            }
            total = total + atom.prob.clone();
        }
        let mass_ok = match N::MODE {
            Mode::Exact => total == N::one(),
            Mode::Float => (total.to_f64() - 1.0).abs() <= FLOAT_MASS_TOLERANCE,
        };
        if !mass_ok {
            return Err(Error::invalid(format!(
                "probabilities sum to {}, not 1",
                total.render()
            )));
        }
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += a.prob.to_f64();
                acc
            })
            .collect();
        Ok(FiniteDistribution { atoms, cumulative })
    }

    /// Point mass.
    pub fn point(value: ValueVector<N>) -> Self {
        Self::new(vec![Atom {
            value,
            prob: N::one(),
        }])
        .expect("a point mass is valid")
    }

    pub fn from_pairs(pairs: Vec<(ValueVector<N>, N)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(value, prob)| Atom { value, prob })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom<N>] {
        &self.atoms
    }

    pub fn k(&self) -> usize {
        self.atoms[0].value.k()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Pr[‖v‖₁ ≤ x].
    pub fn cdf_l1(&self, x: &N) -> N {
        self.atoms
            .iter()
            .filter(|a| !a.value.l1().tol_gt(x))
            .fold(N::zero(), |acc, a| acc + a.prob.clone())
    }

    /// Pr[v_j ≤ x].
    pub fn cdf_coord(&self, j: usize, x: &N) -> N {
        self.atoms
            .iter()
            .filter(|a| !a.value.entries()[j].tol_gt(x))
            .fold(N::zero(), |acc, a| acc + a.prob.clone())
    }

    /// Draws an atom index.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.atoms.len() - 1)
    }
}

/// Independent per-step distributions 𝓕 = ×ₜ 𝓕ₜ.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductPrior<N> {
    steps: Vec<FiniteDistribution<N>>,
    iid: bool,
}

impl<N: Scalar> ProductPrior<N> {
    pub fn new(steps: Vec<FiniteDistribution<N>>) -> Result<Self> {
        let first = steps
            .first()
            .ok_or_else(|| Error::invalid("a prior needs at least one step"))?;
        let k = first.k();
        for (t, s) in steps.iter().enumerate() {
            if s.k() != k {
                return Err(Error::invalid(format!(
                    "step {} has dimension {}, expected {k}",
                    t + 1,
                    s.k()
                )));
            }
        }
        let iid = steps.iter().all(|s| s.atoms == first.atoms);
        Ok(ProductPrior { steps, iid })
    }

    /// Every step draws from `dist`.
    pub fn iid(dist: FiniteDistribution<N>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a prior needs at least one step"));
        }
        Ok(ProductPrior {
            steps: vec![dist; n],
            iid: true,
        })
    }

    /// The prior that realizes `sigma` with probability one.
    pub fn deterministic(sigma: &Sequence<N>) -> Self {
        Self::new(
            sigma
                .candidates()
                .iter()
                .cloned()
                .map(FiniteDistribution::point)
                .collect(),
        )
        .expect("sequence has uniform k")
    }

    pub fn steps(&self) -> &[FiniteDistribution<N>] {
        &self.steps
    }

    pub fn n(&self) -> usize {
        self.steps.len()
    }

    pub fn k(&self) -> usize {
        self.steps[0].k()
    }

    pub fn is_iid(&self) -> bool {
        self.iid
    }

    pub fn is_deterministic(&self) -> bool {
        self.steps.iter().all(|s| s.len() == 1)
    }

    /// The only realization of a deterministic prior.
    pub fn as_sequence(&self) -> Option<Sequence<N>> {
        self.is_deterministic().then(|| {
            Sequence::new(self.steps.iter().map(|s| s.atoms[0].value.clone()).collect())
                .expect("uniform k")
        })
    }

    /// Number of joint realizations, Πₜ |supp 𝓕ₜ|.
    pub fn support_size(&self) -> BigUint {
        self.steps
            .iter()
            .fold(BigUint::from(1u32), |acc, s| acc * BigUint::from(s.len()))
    }

    /// First `n` steps.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n() {
            return Err(Error::invalid(format!("cannot truncate to {n} steps")));
        }
        Self::new(self.steps[..n].to_vec())
    }

    pub fn append(&self, more: &[FiniteDistribution<N>]) -> Result<Self> {
        let mut steps = self.steps.clone();
        steps.extend(more.iter().cloned());
        Self::new(steps)
    }

    /// Every joint realization with its exact probability, or
    /// `ResourceLimit` when there are more than `budget` of them.
    pub fn realizations(&self, budget: u64) -> Result<Realizations<'_, N>> {
        let size = self.support_size();
        if size > BigUint::from(budget) {
            return Err(Error::limit("realization enumeration", size, budget));
        }
        Ok(Realizations {
            prior: self,
            odometer: Some(vec![0; self.n()]),
        })
    }

    /// Draws atom indices, one per step.
    pub fn sample_indices<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.steps.iter().map(|s| s.sample_index(rng)).collect()
    }

    pub fn sequence_of(&self, indices: &[usize]) -> Sequence<N> {
        Sequence::new(
            indices
                .iter()
                .zip(&self.steps)
                .map(|(&i, s)| s.atoms[i].value.clone())
                .collect(),
        )
        .expect("uniform k")
    }

    pub fn probability_of(&self, indices: &[usize]) -> N {
        indices
            .iter()
            .zip(&self.steps)
            .fold(N::one(), |acc, (&i, s)| acc * s.atoms[i].prob.clone())
    }

    /// Support values of V* = maxₜ ‖σ⁽ᵗ⁾‖₁ with their exact probabilities,
    /// ascending. Computed from the product of per-step CDFs, without
    /// enumerating joint realizations.
    pub fn max_value_distribution(&self) -> Vec<(N, N)> {
        let mut grid: Vec<N> = self
            .steps
            .iter()
            .flat_map(|s| s.atoms.iter().map(|a| a.value.l1()))
            .collect();
        sort_dedup(&mut grid);
        point_masses(&grid, |x| {
            self.steps
                .iter()
                .fold(N::one(), |acc, s| acc * s.cdf_l1(x))
        })
    }

    /// Distribution of S*_j = maxₜ σ⁽ᵗ⁾_j.
    pub fn coord_max_distribution(&self, j: usize) -> Vec<(N, N)> {
        let mut grid: Vec<N> = self
            .steps
            .iter()
            .flat_map(|s| s.atoms.iter().map(|a| a.value.entries()[j].clone()))
            .collect();
        sort_dedup(&mut grid);
        point_masses(&grid, |x| {
            self.steps
                .iter()
                .fold(N::one(), |acc, s| acc * s.cdf_coord(j, x))
        })
    }
}

fn sort_dedup<N: Scalar>(grid: &mut Vec<N>) {
    grid.sort_by(|a, b| a.tol_cmp(b));
    grid.dedup_by(|a, b| a.approx_eq(b));
}

fn point_masses<N: Scalar>(grid: &[N], cdf: impl Fn(&N) -> N) -> Vec<(N, N)> {
    let mut prev = N::zero();
    let mut out = Vec::new();
    for x in grid {
        let c = cdf(x);
        let mass = c.clone() - prev;
        if mass.is_positive_tol() {
            out.push((x.clone(), mass));
        }
        prev = c;
    }
    out
}

/// Iterator over `(atom indices, probability)` for every joint realization.
pub struct Realizations<'a, N> {
    prior: &'a ProductPrior<N>,
    odometer: Option<Vec<usize>>,
}

impl<N: Scalar> Iterator for Realizations<'_, N> {
    type Item = (Vec<usize>, N);

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.odometer.take()?;
        let prob = self.prior.probability_of(&current);
        let mut next = current.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.prior.steps[pos].len() {
                self.odometer = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some((current, prob))
    }
}
