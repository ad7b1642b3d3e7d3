//! Numerical-semigroup membership and the Sylvester/Frobenius threshold.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("generators {a} and {b} are not coprime")]
    NotCoprime { a: u64, b: u64 },
}

/// A representation `k = sum(multiplicity * generator)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupRep {
    /// `(generator, multiplicity)` pairs, in the caller's generator order.
    pub coefficients: Vec<(u64, u64)>,
}

impl SemigroupRep {
    pub fn value(&self) -> u64 {
        self.coefficients.iter().map(|(g, m)| g * m).sum()
    }

    /// Multiplicity vector in generator order.
    pub fn multiplicities(&self) -> Vec<u64> {
        self.coefficients.iter().map(|&(_, m)| m).collect()
    }
}

/// Decides `k ∈ gens[0]·ℕ + gens[1]·ℕ + …` by bounded exhaustive search and
/// returns the lexicographically smallest multiplicity vector in the given
/// generator order, or `None`. The search doubles as its own certificate:
/// every multiplicity vector with value at most `k` is visited.
pub fn member(k: u64, gens: &[u64]) -> Option<SemigroupRep> {
    assert!(!gens.is_empty(), "generator list must be non-empty");
    assert!(gens.iter().all(|&g| g > 0), "generators must be positive");
    let mults = search(k, gens)?;
    Some(SemigroupRep {
        coefficients: gens.iter().copied().zip(mults).collect(),
    })
}

fn search(k: u64, gens: &[u64]) -> Option<Vec<u64>> {
    let (&g, rest) = gens.split_first().expect("non-empty");
    if rest.is_empty() {
        return (k % g == 0).then(|| vec![k / g]);
    }
    // Smallest multiplicity first, so the first hit is lexicographically least.
    for m in 0..=k / g {
        if let Some(mut tail) = search(k - m * g, rest) {
            tail.insert(0, m);
            return Some(tail);
        }
    }
    None
}

/// `(a-1)(b-1)` for coprime positive `a`, `b`: every integer at or above this
/// value is representable in `aℕ + bℕ`, and `(a-1)(b-1) - 1` is not.
pub fn frobenius_threshold(a: u64, b: u64) -> Result<u64, SemigroupError> {
    assert!(a > 0 && b > 0, "generators must be positive");
    if a.gcd(&b) != 1 {
        return Err(SemigroupError::NotCoprime { a, b });
    }
    Ok((a - 1) * (b - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_has_the_empty_representation() {
        let rep = member(0, &[3, 5]).unwrap();
        assert_eq!(rep.multiplicities(), vec![0, 0]);
        assert_eq!(rep.value(), 0);
    }

    #[test]
    fn five_is_not_in_three_four() {
        assert_eq!(member(5, &[3, 4]), None);
    }

    #[test]
    fn eleven_in_three_five() {
        // brute force over k1 <= 3, k2 <= 2 gives (2, 1) as the least vector
        let rep = member(11, &[3, 5]).unwrap();
        assert_eq!(rep.multiplicities(), vec![2, 1]);
        assert_eq!(rep.value(), 11);
    }

    #[test]
    fn representation_is_lexicographically_least() {
        // 30 = 0*3 + 6*5 = 5*3 + 3*5 = 10*3; least first coordinate wins
        let rep = member(30, &[3, 5]).unwrap();
        assert_eq!(rep.multiplicities(), vec![0, 6]);
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_threshold(3, 4).unwrap(), 6);
        assert_eq!(frobenius_threshold(3, 5).unwrap(), 8);
        assert_eq!(frobenius_threshold(2, 3).unwrap(), 2);
        assert_eq!(
            frobenius_threshold(4, 6),
            Err(SemigroupError::NotCoprime { a: 4, b: 6 })
        );
    }

    #[test]
    fn threshold_boundary_for_three_four() {
        assert!(member(5, &[3, 4]).is_none());
        for k in 6..=20 {
            assert!(member(k, &[3, 4]).is_some(), "k = {k}");
        }
    }

    #[test]
    fn threshold_boundary_for_three_five() {
        assert!(member(7, &[3, 5]).is_none());
        for k in 8..=30 {
            assert!(member(k, &[3, 5]).is_some(), "k = {k}");
        }
    }
}
