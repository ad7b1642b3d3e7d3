//! Sparse multivariate polynomials in three variables over the rationals.
//!
//! Coefficients are arbitrary-precision rationals, always in lowest terms;
//! no zero coefficient is ever stored. The canonical term order is
//! graded-lexicographic descending, which makes serialized output bit-stable
//! across runs. Every operation is exact; there is no floating point anywhere.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::degree::Degree;

/// Default ceiling on stored terms during composition (resource guard).
pub const DEFAULT_TERM_LIMIT: usize = 1_000_000;

/// Largest exponent accepted from serialized input.
pub const MAX_JSON_EXPONENT: u32 = 1 << 20;

/// Errors from polynomial operations.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("operation requires a nonconstant polynomial")]
    ConstantInput,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("axis pair must satisfy 1 <= i < j <= 3, got ({i}, {j})")]
    BadAxes { i: usize, j: usize },
    #[error("term count {terms} exceeds the configured limit {limit}")]
    TermLimitExceeded { terms: usize, limit: usize },
    #[error("monomial exponent overflow")]
    ExponentOverflow,
}

/// One of the three coordinate variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X1,
    X2,
    X3,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X1, Var::X2, Var::X3];

    pub fn index0(self) -> usize {
        match self {
            Var::X1 => 0,
            Var::X2 => 1,
            Var::X3 => 2,
        }
    }

    /// 1-based index, matching the serialized form.
    pub fn index1(self) -> usize {
        self.index0() + 1
    }

    pub fn from_index1(i: usize) -> Option<Var> {
        match i {
            1 => Some(Var::X1),
            2 => Some(Var::X2),
            3 => Some(Var::X3),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.index1())
    }
}

/// Exponent triple of a single term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u32; 3],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; 3] };

    pub fn new(exps: [u32; 3]) -> Self {
        Monomial { exps }
    }

    pub fn var(v: Var) -> Self {
        let mut exps = [0; 3];
        exps[v.index0()] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> [u32; 3] {
        self.exps
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.exps[v.index0()]
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = [0u32; 3];
        for i in 0..3 {
            exps[i] = self.exps[i].checked_add(other.exps[i])?;
        }
        Some(Monomial { exps })
    }
}

/// Graded-lexicographic order: total degree first, then the exponent triple.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Canonical `numerator/denominator` form, denominator always positive.
pub(crate) fn coeff_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Parses `n` or `n/d` with `d > 0`, rejecting non-reduced fractions.
pub(crate) fn parse_coeff(s: &str) -> Result<BigRational, String> {
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}"))?;
            Ok(BigRational::from_integer(n))
        }
        Some((ns, ds)) => {
            let n = BigInt::from_str(ns).map_err(|e| format!("bad numerator {ns:?}: {e}"))?;
            let d = BigInt::from_str(ds).map_err(|e| format!("bad denominator {ds:?}: {e}"))?;
            if !d.is_positive() {
                return Err(format!("denominator must be positive in {s:?}"));
            }
            let r = BigRational::new(n.clone(), d.clone());
            if r.numer() != &n || r.denom() != &d {
                return Err(format!("coefficient {s:?} is not in lowest terms"));
            }
            Ok(r)
        }
    }
}

/// Sparse polynomial in `x1, x2, x3` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::ONE, c);
        }
        Polynomial { terms }
    }

    pub fn constant_i64(c: i64) -> Self {
        Polynomial::constant(rat(c))
    }

    pub fn variable(v: Var) -> Self {
        Polynomial::monomial(Monomial::var(v), BigRational::one())
    }

    /// `x_v^e`
    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut exps = [0; 3];
        exps[v.index0()] = e;
        Polynomial::monomial(Monomial::new(exps), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lexicographic ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            None => Degree::NegInf,
            Some(m) => Degree::Finite(m.total_degree() as i64),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree() <= Degree::Finite(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Highest homogeneous part.
    pub fn top_part(&self) -> Result<Polynomial, PolyError> {
        let top = self
            .terms
            .keys()
            .next_back()
            .ok_or(PolyError::ZeroPolynomial)?
            .total_degree();
        Ok(Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == top)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        })
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Polynomial {
        let i = v.index0();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps;
            exps[i] = e - 1;
            out.add_term(Monomial::new(exps), c * rat(e as i64));
        }
        out
    }

    pub(crate) fn try_mul(&self, other: &Polynomial, limit: usize) -> Result<Polynomial, PolyError> {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb).ok_or(PolyError::ExponentOverflow)?;
                let c = ca * cb;
                match terms.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
            if terms.len() > limit {
                return Err(PolyError::TermLimitExceeded {
                    terms: terms.len(),
                    limit,
                });
            }
        }
        Ok(Polynomial { terms })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        self.try_pow(e, usize::MAX).expect("unlimited power")
    }

    pub fn try_pow(&self, e: u32, limit: usize) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.try_mul(self, limit)?;
        }
        Ok(acc)
    }

    /// Simultaneous substitution `x_i -> coords[i]` under the default term limit.
    pub fn compose(&self, coords: &[Polynomial; 3]) -> Result<Polynomial, PolyError> {
        self.compose_limited(coords, DEFAULT_TERM_LIMIT)
    }

    /// Simultaneous substitution with an explicit term-count guard.
    ///
    /// Powers of the substituted coordinates are memoized, so repeated
    /// exponents across terms cost one multiplication each.
    pub fn compose_limited(
        &self,
        coords: &[Polynomial; 3],
        limit: usize,
    ) -> Result<Polynomial, PolyError> {
        let mut pows: [Vec<Polynomial>; 3] = [
            vec![Polynomial::one()],
            vec![Polynomial::one()],
            vec![Polynomial::one()],
        ];
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for i in 0..3 {
                let e = m.exps[i] as usize;
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e {
                    let next = pows[i].last().unwrap().try_mul(&coords[i], limit)?;
                    pows[i].push(next);
                }
                term = term.try_mul(&pows[i][e], limit)?;
            }
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

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs, usize::MAX)
            .expect("monomial exponent overflow in multiplication")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mag = c.abs();
            let vars: Vec<String> = Var::ALL
                .iter()
                .filter(|v| m.exp(**v) > 0)
                .map(|v| {
                    if m.exp(*v) == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{}", m.exp(*v))
                    }
                })
                .collect();
            let mag_str = if mag.denom().is_one() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            if vars.is_empty() {
                write!(f, "{mag_str}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag_str}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

const AXIS_PAIRS: [(Var, Var); 3] = [
    (Var::X1, Var::X2),
    (Var::X1, Var::X3),
    (Var::X2, Var::X3),
];

/// The 2x2 Jacobian determinant `df/dxi * dg/dxj - df/dxj * dg/dxi`.
pub fn jacobian_minor(
    f: &Polynomial,
    g: &Polynomial,
    i: Var,
    j: Var,
) -> Result<Polynomial, PolyError> {
    if i >= j {
        return Err(PolyError::BadAxes {
            i: i.index1(),
            j: j.index1(),
        });
    }
    Ok(&(&f.partial(i) * &g.partial(j)) - &(&f.partial(j) * &g.partial(i)))
}

/// Jacobian criterion for algebraic independence (valid in characteristic 0).
pub fn alg_independent(f: &Polynomial, g: &Polynomial) -> bool {
    AXIS_PAIRS
        .iter()
        .any(|&(i, j)| !jacobian_minor(f, g, i, j).unwrap().is_zero())
}

/// Degree of the Poisson bracket: `2 + max deg(minor)` over the three
/// Jacobian minors when `f, g` are independent; exactly `0` otherwise.
pub fn poisson_degree(f: &Polynomial, g: &Polynomial) -> Result<Degree, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let minors: Vec<Polynomial> = AXIS_PAIRS
        .iter()
        .map(|&(i, j)| jacobian_minor(f, g, i, j).unwrap())
        .collect();
    if minors.iter().all(Polynomial::is_zero) {
        return Ok(Degree::Finite(0));
    }
    let max = minors
        .iter()
        .map(Polynomial::degree)
        .max()
        .expect("nonempty");
    Ok(max + 2)
}

fn proportional(p: &Polynomial, q: &Polynomial) -> bool {
    if p.term_count() != q.term_count() {
        return false;
    }
    let Some((m0, c0)) = q.terms().next() else {
        return true; // both zero
    };
    if !p.terms.contains_key(m0) {
        return false;
    }
    let ratio = p.coeff(m0) / c0;
    *p == q.scale(&ratio)
}

/// Algebraic dependence test for nonzero homogeneous polynomials of positive
/// degree: with `m = lcm(deg f, deg g)`, the pair is dependent exactly when
/// `f^(m/deg f)` and `g^(m/deg g)` are scalar-proportional.
pub fn homog_dependent(fbar: &Polynomial, gbar: &Polynomial) -> Result<bool, PolyError> {
    let a = homogeneous_degree(fbar)?;
    let b = homogeneous_degree(gbar)?;
    if a == 0 || b == 0 {
        return Err(PolyError::ConstantInput);
    }
    let m = a.lcm(&b);
    let pf = fbar.pow((m / a) as u32);
    let pg = gbar.pow((m / b) as u32);
    Ok(proportional(&pf, &pg))
}

/// Membership of `fbar` in the scalar algebra generated by `gbar`, for
/// nonzero homogeneous inputs: true exactly when `deg gbar` divides
/// `deg fbar` and `fbar = c * gbar^(deg fbar / deg gbar)`.
pub fn in_coefficient_algebra(fbar: &Polynomial, gbar: &Polynomial) -> Result<bool, PolyError> {
    let a = homogeneous_degree(fbar)?;
    let b = homogeneous_degree(gbar)?;
    if b == 0 {
        return Ok(a == 0);
    }
    if a % b != 0 {
        return Ok(false);
    }
    let cand = gbar.pow((a / b) as u32);
    Ok(proportional(fbar, &cand))
}

fn homogeneous_degree(p: &Polynomial) -> Result<u64, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !p.is_homogeneous() {
        return Err(PolyError::NotHomogeneous);
    }
    Ok(p.terms.keys().next().unwrap().total_degree())
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    c: String,
    e: [u32; 3],
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermRepr {
                    c: coeff_string(c),
                    e: m.exps(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
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
            if terms.insert(Monomial::new(t.e), c).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate exponent triple {:?}",
                    t.e
                )));
            }
        }
        Ok(Polynomial { terms })
    }
}
