use crate::error::{Error, Result};
use crate::model::ValueVector;
use crate::scalar::Scalar;

/// An ordered realization of `n >= 1` candidates sharing dimension `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence<N> {
    candidates: Vec<ValueVector<N>>,
}

impl<N: Scalar> Sequence<N> {
    pub fn new(candidates: Vec<ValueVector<N>>) -> Result<Self> {
        let first = candidates
            .first()
            .ok_or_else(|| Error::invalid("a sequence needs at least one candidate"))?;
        let k = first.k();
        for (t, c) in candidates.iter().enumerate() {
            if c.k() != k {
                return Err(Error::invalid(format!(
                    "candidate {} has dimension {}, expected {k}",
                    t + 1,
                    c.k()
                )));
            }
        }
        Ok(Sequence { candidates })
    }

    /// Builds from integer rows, e.g. `&[&[1, 0], &[0, 1]]`.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| ValueVector::from_ints(r))
                .collect::<Result<_>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.candidates.len()
    }

    pub fn k(&self) -> usize {
        self.candidates[0].k()
    }

    pub fn candidates(&self) -> &[ValueVector<N>] {
        &self.candidates
    }

    /// Candidate at 1-based position `t`.
    pub fn at(&self, t: usize) -> Result<&ValueVector<N>> {
        self.check_step(t)?;
        Ok(&self.candidates[t - 1])
    }

    /// First `t` candidates as a new sequence.
    pub fn prefix(&self, t: usize) -> Result<Self> {
        self.check_step(t)?;
        Ok(Sequence {
            candidates: self.candidates[..t].to_vec(),
        })
    }

    /// `front` followed by `self`.
    pub fn prepend(&self, front: ValueVector<N>) -> Result<Self> {
        front.check_k(self.k())?;
        let mut candidates = Vec::with_capacity(self.n() + 1);
        candidates.push(front);
        candidates.extend(self.candidates.iter().cloned());
        Ok(Sequence { candidates })
    }

    pub fn concat(&self, tail: &Self) -> Result<Self> {
        if tail.k() != self.k() {
            return Err(Error::invalid("cannot concatenate sequences of different k"));
        }
        let mut candidates = self.candidates.clone();
        candidates.extend(tail.candidates.iter().cloned());
        Ok(Sequence { candidates })
    }

    /// Rational values ‖σ⁽ᵗ⁾‖₁ in order.
    pub fn values(&self) -> Vec<N> {
        self.candidates.iter().map(ValueVector::l1).collect()
    }

    /// Running super candidates s⁽¹⁾, …, s⁽ⁿ⁾.
    pub fn running_super(&self) -> Vec<ValueVector<N>> {
        let mut out: Vec<ValueVector<N>> = Vec::with_capacity(self.n());
        for c in &self.candidates {
            let next = match out.last() {
                Some(prev) => prev.join(c),
                None => c.clone(),
            };
            out.push(next);
        }
        out
    }

    pub(crate) fn check_step(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.n() {
            return Err(Error::invalid(format!(
                "step {t} out of range 1..={}",
                self.n()
            )));
        }
        Ok(())
    }
}

/// Coordinatewise maximum over a non-empty prefix: the reference point.
pub fn super_candidate<N: Scalar>(prefix: &[ValueVector<N>]) -> Result<ValueVector<N>> {
    let (first, rest) = prefix
        .split_first()
        .ok_or_else(|| Error::invalid("super candidate of an empty prefix"))?;
    rest.iter().try_fold(first.clone(), |acc, c| {
        c.check_k(acc.k())?;
        Ok(acc.join(c))
    })
}

/// No two identical candidates and no all-zero candidate.
pub fn is_succinct<N: Scalar>(sigma: &Sequence<N>) -> bool {
    let c = sigma.candidates();
    c.iter().all(|v| !v.is_zero())
        && c.iter()
            .enumerate()
            .all(|(i, v)| c[..i].iter().all(|u| u != v))
}

/// Unique non-zero candidates in order of first occurrence.
///
/// Fails only when every candidate is the zero vector, since the result
/// would be empty.
pub fn representation<N: Scalar>(sigma: &Sequence<N>) -> Result<Sequence<N>> {
    let mut out: Vec<ValueVector<N>> = Vec::new();
    for v in sigma.candidates() {
        if !v.is_zero() && !out.contains(v) {
            out.push(v.clone());
        }
    }
    if out.is_empty() {
        return Err(Error::invalid(
            "representation of an all-zero sequence is empty",
        ));
    }
    Sequence::new(out)
}

/// ‖a⁽ⁱ⁾‖₁ ≥ ‖b⁽ⁱ⁾‖₁ at every position. Lengths must match.
pub fn pointwise_dominates<N: Scalar>(a: &Sequence<N>, b: &Sequence<N>) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::invalid(format!(
            "point-wise dominance needs equal lengths ({} vs {})",
            a.n(),
            b.n()
        )));
    }
    Ok(a.candidates()
        .iter()
        .zip(b.candidates())
        .all(|(x, y)| x.l1().tol_ge(&y.l1())))
}

/// Smallest value in `a` strictly exceeds the largest value in `b`.
pub fn higher_quality<N: Scalar>(a: &Sequence<N>, b: &Sequence<N>) -> bool {
    let min_a = a
        .values()
        .into_iter()
        .reduce(Scalar::min_of)
        .expect("non-empty");
    let max_b = b
        .values()
        .into_iter()
        .reduce(Scalar::max_of)
        .expect("non-empty");
    min_a.tol_gt(&max_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type S = Sequence<Rational>;

    fn v(e: &[i64]) -> ValueVector<Rational> {
        ValueVector::from_ints(e).unwrap()
    }

    #[test]
    fn super_candidate_examples() {
        let s = S::from_rows(&[&[1, 0], &[0, 1], &[2, 0]]).unwrap();
        assert_eq!(super_candidate(s.candidates()).unwrap(), v(&[2, 1]));
        assert_eq!(super_candidate(&[v(&[5, 3])]).unwrap(), v(&[5, 3]));
        let s = S::from_rows(&[&[1, 0], &[0, 1], &[2, 0], &[0, 2]]).unwrap();
        assert_eq!(super_candidate(s.candidates()).unwrap(), v(&[2, 2]));
        assert!(super_candidate::<Rational>(&[]).is_err());
    }

    #[test]
    fn rejects_mixed_dimensions() {
        assert!(S::from_rows(&[&[1, 0], &[1]]).is_err());
        assert!(S::new(vec![]).is_err());
    }

    #[test]
    fn representation_dedupes_and_drops_zero() {
        let s = S::from_rows(&[&[1, 0], &[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let r = representation(&s).unwrap();
        assert_eq!(r, S::from_rows(&[&[1, 0], &[0, 1]]).unwrap());
        assert!(is_succinct(&r));
        assert_eq!(representation(&r).unwrap(), r);
        // the symbolic r(1,2,1,2,3) = 1,2,3 example, with k = 1
        let s = S::from_rows(&[&[1], &[2], &[1], &[2], &[3]]).unwrap();
        assert_eq!(representation(&s).unwrap(), S::from_rows(&[&[1], &[2], &[3]]).unwrap());
        assert!(representation(&S::from_rows(&[&[0, 0]]).unwrap()).is_err());
    }

    #[test]
    fn succinct_predicate() {
        assert!(!is_succinct(&S::from_rows(&[&[1, 0], &[1, 0]]).unwrap()));
        assert!(!is_succinct(&S::from_rows(&[&[0, 0]]).unwrap()));
        assert!(is_succinct(&S::from_rows(&[&[1, 0], &[0, 1]]).unwrap()));
    }

    #[test]
    fn dominance_requires_equal_length() {
        let a = S::from_rows(&[&[1, 0], &[0, 2]]).unwrap();
        let b = S::from_rows(&[&[1, 0]]).unwrap();
        assert!(pointwise_dominates(&a, &b).is_err());
        let c = S::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(pointwise_dominates(&a, &c).unwrap());
        assert!(!pointwise_dominates(&c, &a).unwrap());
    }
}
