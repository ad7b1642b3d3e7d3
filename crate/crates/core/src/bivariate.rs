//! Polynomials in two variables, used for the bivariate `g` of an elementary
//! reduction `F -> F - g(A, B)` and for composition-degree experiments.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::{coeff_string, parse_coeff, PolyError, Polynomial, MAX_JSON_EXPONENT};

/// Exponent pair, graded-lex ordered like [`crate::poly::Monomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BiExp {
    exps: [u32; 2],
}

impl BiExp {
    pub fn new(x: u32, y: u32) -> Self {
        BiExp { exps: [x, y] }
    }

    pub fn x(&self) -> u32 {
        self.exps[0]
    }

    pub fn y(&self) -> u32 {
        self.exps[1]
    }

    fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }
}

impl Ord for BiExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for BiExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse bivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Bivariate {
    terms: BTreeMap<BiExp, BigRational>,
}

impl Bivariate {
    pub fn zero() -> Self {
        Bivariate::default()
    }

    pub fn monomial(e: BiExp, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Bivariate { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (BiExp, BigRational)>>(iter: I) -> Self {
        let mut terms: BTreeMap<BiExp, BigRational> = BTreeMap::new();
        for (e, c) in iter {
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(&e);
            }
        }
        Bivariate { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BiExp, &BigRational)> {
        self.terms.iter()
    }

    /// Largest exponent of the first variable, `None` for the zero polynomial.
    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(BiExp::x).max()
    }

    /// Largest exponent of the second variable, `None` for the zero polynomial.
    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(BiExp::y).max()
    }

    /// Exact evaluation at two polynomial arguments, with power memoization.
    pub fn eval(
        &self,
        x: &Polynomial,
        y: &Polynomial,
        limit: usize,
    ) -> Result<Polynomial, PolyError> {
        let mut xpows = vec![Polynomial::one()];
        let mut ypows = vec![Polynomial::one()];
        let mut acc = Polynomial::zero();
        for (e, c) in &self.terms {
            while xpows.len() <= e.x() as usize {
                xpows.push(xpows.last().unwrap().try_mul(x, limit)?);
            }
            while ypows.len() <= e.y() as usize {
                ypows.push(ypows.last().unwrap().try_mul(y, limit)?);
            }
            let term = xpows[e.x() as usize]
                .try_mul(&ypows[e.y() as usize], limit)?
                .scale(c);
            acc = &acc + &term;
            if acc.term_count() > limit {
                return Err(PolyError::TermLimitExceeded {
                    terms: acc.term_count(),
                    limit,
                });
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Bivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let pieces: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = format!("({})", coeff_string(c));
                if e.x() > 0 {
                    s.push_str(&format!("*x^{}", e.x()));
                }
                if e.y() > 0 {
                    s.push_str(&format!("*y^{}", e.y()));
                }
                s
            })
            .collect();
        write!(f, "{}", pieces.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct BiTermRepr {
    c: String,
    e: [u32; 2],
}

#[derive(Serialize, Deserialize)]
struct BiRepr {
    terms: Vec<BiTermRepr>,
}

impl Serialize for Bivariate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = BiRepr {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| BiTermRepr {
                    c: coeff_string(c),
                    e: e.exps,
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Bivariate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BiRepr::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for t in repr.terms {
            if t.e.iter().any(|&e| e > MAX_JSON_EXPONENT) {
                return Err(D::Error::custom(format!(
                    "exponent exceeds {MAX_JSON_EXPONENT} in {:?}",
                    t.e
                )));
            }
            let c = parse_coeff(&t.c).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficient stored in polynomial"));
            }
            if terms.insert(BiExp::new(t.e[0], t.e[1]), c).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate exponent pair {:?}",
                    t.e
                )));
            }
        }
        Ok(Bivariate { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Var, DEFAULT_TERM_LIMIT};
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn eval_substitutes_both_arguments() {
        // g(x, y) = x^2 y evaluated at (x1 + x3^3, x2)
        let g = Bivariate::monomial(BiExp::new(2, 1), rat(1));
        let a = &Polynomial::variable(Var::X1) + &Polynomial::var_pow(Var::X3, 3);
        let b = Polynomial::variable(Var::X2);
        let v = g.eval(&a, &b, DEFAULT_TERM_LIMIT).unwrap();
        assert_eq!(v, &a.pow(2) * &b);
    }

    #[test]
    fn deg_components() {
        let g = Bivariate::from_terms([(BiExp::new(2, 1), rat(1)), (BiExp::new(0, 3), rat(-2))]);
        assert_eq!(g.deg_x(), Some(2));
        assert_eq!(g.deg_y(), Some(3));
        assert_eq!(Bivariate::zero().deg_y(), None);
    }

    #[test]
    fn json_round_trip() {
        let g = Bivariate::from_terms([(BiExp::new(2, 1), rat(1)), (BiExp::new(0, 3), rat(-2))]);
        let s = serde_json::to_string(&g).unwrap();
        let back: Bivariate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
