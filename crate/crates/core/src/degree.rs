//! Total degrees with a `-inf` bottom element for the zero polynomial.

use std::fmt;
use std::ops::Add;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Total degree of a polynomial.
///
/// `NegInf` is the degree of the zero polynomial. It compares strictly below
/// every finite degree and absorbs addition, so identities like
/// `deg(p*q) = deg p + deg q` stay total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(value: i64) -> Self {
        Degree::Finite(value)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    /// The finite value, if any.
    pub fn as_finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(v) => Some(v),
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl Add<i64> for Degree {
    type Output = Degree;

    fn add(self, rhs: i64) -> Degree {
        self + Degree::Finite(rhs)
    }
}

impl PartialEq<i64> for Degree {
    fn eq(&self, other: &i64) -> bool {
        matches!(self, Degree::Finite(v) if v == other)
    }
}

impl PartialOrd<i64> for Degree {
    fn partial_cmp(&self, other: &i64) -> Option<std::cmp::Ordering> {
        Some(self.cmp(&Degree::Finite(*other)))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::NegInf => serializer.serialize_str("-inf"),
            Degree::Finite(v) => serializer.serialize_i64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(Degree::Finite(v)),
            Repr::Str(s) if s == "-inf" => Ok(Degree::NegInf),
            Repr::Str(s) => Err(D::Error::custom(format!("invalid degree: {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_inf_is_below_every_finite_degree() {
        assert!(Degree::NegInf < Degree::Finite(i64::MIN));
        assert!(Degree::NegInf < Degree::Finite(0));
        assert!(Degree::NegInf < 0);
    }

    #[test]
    fn neg_inf_absorbs_addition() {
        assert_eq!(Degree::NegInf + Degree::Finite(7), Degree::NegInf);
        assert_eq!(Degree::Finite(7) + Degree::NegInf, Degree::NegInf);
        assert_eq!(Degree::Finite(3) + Degree::Finite(4), Degree::Finite(7));
    }

    #[test]
    fn ordering_on_finite_values() {
        assert!(Degree::Finite(2) < Degree::Finite(3));
        assert_eq!(Degree::Finite(5), 5);
    }
}
