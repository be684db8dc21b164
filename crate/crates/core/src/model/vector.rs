use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A candidate's non-negative value across `k` features.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueVector<N> {
    entries: Vec<N>,
}

impl<N: Scalar> ValueVector<N> {
    pub fn new(entries: Vec<N>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("value vector needs at least one entry"));
        }
        for (j, e) in entries.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::invalid(format!("entry {j} is not finite")));
            }
            if e.is_negative_tol() {
                return Err(Error::invalid(format!(
                    "entry {j} is negative ({})",
                    e.render()
                )));
            }
        }
        Ok(ValueVector { entries })
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| N::from_int(e)).collect())
    }

    pub fn zeros(k: usize) -> Self {
        assert!(k >= 1, "dimension must be positive");
        ValueVector {
            entries: vec![N::zero(); k],
        }
    }

    /// `value` on dimension `j` (0-based), zero elsewhere.
    pub fn axis(k: usize, j: usize, value: N) -> Result<Self> {
        if j >= k {
            return Err(Error::invalid(format!("axis {j} out of range for k={k}")));
        }
        let mut entries = vec![N::zero(); k];
        entries[j] = value;
        Self::new(entries)
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[N] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<N> {
        self.entries
    }

    /// The rational value ‖v‖₁.
    pub fn l1(&self) -> N {
        self.entries
            .iter()
            .cloned()
            .fold(N::zero(), |acc, e| acc + e)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.approx_eq(&N::zero()))
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &Self) -> Self {
        debug_assert_eq!(self.k(), other.k());
        ValueVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone().max_of(b.clone()))
                .collect(),
        }
    }

    /// True when every coordinate of `self` is at least the matching one in `other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.k() == other.k()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.tol_ge(b))
    }

    pub fn key(&self) -> Vec<N::Key> {
        self.entries.iter().map(Scalar::key).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(Scalar::to_f64).collect()
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<()> {
        if self.k() != k {
            return Err(Error::invalid(format!(
                "dimension mismatch: expected k={k}, got k={}",
                self.k()
            )));
        }
        Ok(())
    }
}

impl<N: Scalar> std::fmt::Display for ValueVector<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e.render())?;
        }
        write!(f, ")")
    }
}
