//! Polynomial endomorphisms of 3-space and tame generator words.
//!
//! A `PolyMap` is any triple of polynomials; nothing about the type promises
//! invertibility. Automorphy is certified constructively: a `GeneratorWord`
//! of linear and elementary generators realizes to a map, and the word can be
//! inverted syntactically so that `realize(w) ∘ realize(invert(w))` is the
//! identity by exact composition.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::degree::Degree;
use crate::poly::{coeff_string, parse_coeff, PolyError, Polynomial, Var, DEFAULT_TERM_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AutomorphismError {
    #[error("linear generator matrix is singular")]
    SingularLinear,
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A polynomial endomorphism of 3-space, given by its coordinate functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    coords: [Polynomial; 3],
}

impl PolyMap {
    pub fn new(coords: [Polynomial; 3]) -> Self {
        PolyMap { coords }
    }

    pub fn identity() -> Self {
        PolyMap {
            coords: [
                Polynomial::variable(Var::X1),
                Polynomial::variable(Var::X2),
                Polynomial::variable(Var::X3),
            ],
        }
    }

    pub fn coords(&self) -> &[Polynomial; 3] {
        &self.coords
    }

    pub fn coord(&self, v: Var) -> &Polynomial {
        &self.coords[v.index0()]
    }

    /// Component-wise degrees.
    pub fn mdeg(&self) -> Multidegree {
        Multidegree([
            self.coords[0].degree(),
            self.coords[1].degree(),
            self.coords[2].degree(),
        ])
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity()
    }

    /// `self ∘ other` under the default term limit.
    pub fn compose(&self, other: &PolyMap) -> Result<PolyMap, PolyError> {
        self.compose_limited(other, DEFAULT_TERM_LIMIT)
    }

    /// `self ∘ other`: each coordinate of `self` evaluated at `other`.
    pub fn compose_limited(&self, other: &PolyMap, limit: usize) -> Result<PolyMap, PolyError> {
        Ok(PolyMap {
            coords: [
                self.coords[0].compose_limited(&other.coords, limit)?,
                self.coords[1].compose_limited(&other.coords, limit)?,
                self.coords[2].compose_limited(&other.coords, limit)?,
            ],
        })
    }

    /// The map with coordinates permuted: coordinate `i` of the result is
    /// coordinate `perm[i]` (0-based) of `self`.
    pub fn permute(&self, perm: [usize; 3]) -> PolyMap {
        PolyMap {
            coords: [
                self.coords[perm[0]].clone(),
                self.coords[perm[1]].clone(),
                self.coords[perm[2]].clone(),
            ],
        }
    }
}

/// The triple of coordinate degrees of a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Multidegree(pub [Degree; 3]);

impl Multidegree {
    /// The components as positive integers, when all are finite and >= 1.
    pub fn as_positive(&self) -> Option<[u64; 3]> {
        let mut out = [0u64; 3];
        for (slot, d) in out.iter_mut().zip(self.0.iter()) {
            match d.as_finite() {
                Some(v) if v >= 1 => *slot = v as u64,
                _ => return None,
            }
        }
        Some(out)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

type Matrix3 = [[BigRational; 3]; 3];
type Vector3 = [BigRational; 3];

pub fn zero_vector3() -> Vector3 {
    std::array::from_fn(|_| BigRational::zero())
}

pub fn zero_matrix3() -> Matrix3 {
    std::array::from_fn(|_| zero_vector3())
}

/// A single tame generator.
///
/// Elementary generators are unit-scalar (`x_t -> x_t + g`); arbitrary
/// scalars are expressible by composing with a linear generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Linear { matrix: Matrix3, shift: Vector3 },
    Elementary { target: Var, addend: Polynomial },
}

impl Generator {
    pub fn elementary(target: Var, addend: Polynomial) -> Result<Generator, AutomorphismError> {
        let g = Generator::Elementary { target, addend };
        g.validate()?;
        Ok(g)
    }

    pub fn linear(matrix: Matrix3, shift: Vector3) -> Result<Generator, AutomorphismError> {
        let g = Generator::Linear { matrix, shift };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), AutomorphismError> {
        match self {
            Generator::Elementary { target, addend } => {
                if addend.terms().any(|(m, _)| m.exp(*target) != 0) {
                    return Err(AutomorphismError::InvalidGenerator(format!(
                        "elementary addend for {target} must not involve {target}"
                    )));
                }
                Ok(())
            }
            Generator::Linear { matrix, .. } => {
                if det3(matrix).is_zero() {
                    return Err(AutomorphismError::InvalidGenerator(
                        "linear generator matrix is singular".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// The inverse generator: `Elem(t, g) -> Elem(t, -g)`,
    /// `Linear(A, b) -> Linear(A^-1, -A^-1 b)`.
    pub fn invert(&self) -> Result<Generator, AutomorphismError> {
        match self {
            Generator::Elementary { target, addend } => Ok(Generator::Elementary {
                target: *target,
                addend: -addend,
            }),
            Generator::Linear { matrix, shift } => {
                let inv = invert3(matrix).ok_or(AutomorphismError::SingularLinear)?;
                let mut neg_shift = zero_vector3();
                for (i, out) in neg_shift.iter_mut().enumerate() {
                    for j in 0..3 {
                        *out -= &inv[i][j] * &shift[j];
                    }
                }
                Ok(Generator::Linear {
                    matrix: inv,
                    shift: neg_shift,
                })
            }
        }
    }

    /// `self ∘ map`: the generator applied after an already-built map.
    fn apply_after(&self, map: &PolyMap, limit: usize) -> Result<PolyMap, AutomorphismError> {
        match self {
            Generator::Elementary { target, addend } => {
                let mut coords = map.coords.clone();
                let value = addend.compose_limited(&map.coords, limit)?;
                coords[target.index0()] = &coords[target.index0()] + &value;
                Ok(PolyMap { coords })
            }
            Generator::Linear { matrix, shift } => {
                let mut coords = [Polynomial::zero(), Polynomial::zero(), Polynomial::zero()];
                for (i, out) in coords.iter_mut().enumerate() {
                    let mut acc = Polynomial::constant(shift[i].clone());
                    for j in 0..3 {
                        acc = &acc + &map.coords[j].scale(&matrix[i][j]);
                    }
                    *out = acc;
                }
                Ok(PolyMap { coords })
            }
        }
    }
}

fn det3(m: &Matrix3) -> BigRational {
    let mut det = BigRational::zero();
    det += &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
    det -= &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
    det += &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
    det
}

fn invert3(m: &Matrix3) -> Option<Matrix3> {
    let det = det3(m);
    if det.is_zero() {
        return None;
    }
    let cof = |r: usize, c: usize| -> BigRational {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]])
            - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut out = zero_matrix3();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            // adjugate is the transposed cofactor matrix
            *v = cof(j, i) / &det;
        }
    }
    Some(out)
}

/// A finite sequence of generators, applied left to right:
/// `realize([g1, …, gk]) = gk ∘ … ∘ g1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneratorWord {
    pub generators: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(generators: Vec<Generator>) -> Self {
        GeneratorWord { generators }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Expands the word into an explicit map under the default term limit.
    pub fn realize(&self) -> Result<PolyMap, AutomorphismError> {
        self.realize_limited(DEFAULT_TERM_LIMIT)
    }

    pub fn realize_limited(&self, limit: usize) -> Result<PolyMap, AutomorphismError> {
        let mut map = PolyMap::identity();
        for g in &self.generators {
            g.validate()?;
            map = g.apply_after(&map, limit)?;
        }
        Ok(map)
    }

    /// The reversed word of inverted generators.
    pub fn inverted(&self) -> Result<GeneratorWord, AutomorphismError> {
        let mut generators = Vec::with_capacity(self.generators.len());
        for g in self.generators.iter().rev() {
            generators.push(g.invert()?);
        }
        Ok(GeneratorWord { generators })
    }
}

#[derive(Serialize, Deserialize)]
enum GenRepr {
    #[serde(rename = "elem")]
    Elem { target: usize, g: Polynomial },
    #[serde(rename = "linear")]
    Linear {
        m: [[String; 3]; 3],
        b: [String; 3],
    },
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    word: Vec<GenRepr>,
}

impl Serialize for GeneratorWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let word = self
            .generators
            .iter()
            .map(|g| match g {
                Generator::Elementary { target, addend } => GenRepr::Elem {
                    target: target.index1(),
                    g: addend.clone(),
                },
                Generator::Linear { matrix, shift } => GenRepr::Linear {
                    m: std::array::from_fn(|i| std::array::from_fn(|j| coeff_string(&matrix[i][j]))),
                    b: std::array::from_fn(|i| coeff_string(&shift[i])),
                },
            })
            .collect();
        WordRepr { word }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GeneratorWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = WordRepr::deserialize(deserializer)?;
        let mut generators = Vec::with_capacity(repr.word.len());
        for g in repr.word {
            let gen = match g {
                GenRepr::Elem { target, g } => {
                    let var = Var::from_index1(target)
                        .ok_or_else(|| D::Error::custom(format!("bad target axis {target}")))?;
                    Generator::Elementary {
                        target: var,
                        addend: g,
                    }
                }
                GenRepr::Linear { m, b } => {
                    let mut matrix = zero_matrix3();
                    for i in 0..3 {
                        for j in 0..3 {
                            matrix[i][j] = parse_coeff(&m[i][j]).map_err(D::Error::custom)?;
                        }
                    }
                    let mut shift = zero_vector3();
                    for (slot, s) in shift.iter_mut().zip(b.iter()) {
                        *slot = parse_coeff(s).map_err(D::Error::custom)?;
                    }
                    Generator::Linear { matrix, shift }
                }
            };
            gen.validate().map_err(D::Error::custom)?;
            generators.push(gen);
        }
        Ok(GeneratorWord { generators })
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    coords: [Polynomial; 3],
}

impl Serialize for PolyMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MapRepr {
            coords: self.coords.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MapRepr::deserialize(deserializer)?;
        Ok(PolyMap {
            coords: repr.coords,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn x(i: usize) -> Polynomial {
        Polynomial::variable(Var::from_index1(i).unwrap())
    }

    fn xp(i: usize, e: u32) -> Polynomial {
        Polynomial::var_pow(Var::from_index1(i).unwrap(), e)
    }

    fn elem(target: usize, addend: Polynomial) -> Generator {
        Generator::elementary(Var::from_index1(target).unwrap(), addend).unwrap()
    }

    #[test]
    fn empty_word_realizes_to_identity() {
        let map = GeneratorWord::default().realize().unwrap();
        assert!(map.is_identity());
        assert_eq!(map.mdeg().as_positive(), Some([1, 1, 1]));
    }

    #[test]
    fn single_elementary() {
        let w = GeneratorWord::new(vec![elem(1, xp(3, 3))]);
        let map = w.realize().unwrap();
        assert_eq!(
            map,
            PolyMap::new([&x(1) + &xp(3, 3), x(2), x(3)])
        );
    }

    #[test]
    fn word_for_mdeg_3_6_7() {
        // hand composition: (x1+x2^3, x2+(x1+x2^3)^2, x3+x2^7)
        let w = GeneratorWord::new(vec![elem(1, xp(2, 3)), elem(3, xp(2, 7)), elem(2, xp(1, 2))]);
        let map = w.realize().unwrap();
        let f1 = &x(1) + &xp(2, 3);
        let expected = PolyMap::new([f1.clone(), &x(2) + &f1.pow(2), &x(3) + &xp(2, 7)]);
        assert_eq!(map, expected);
        assert_eq!(map.mdeg().as_positive(), Some([3, 6, 7]));
    }

    #[test]
    fn word_for_mdeg_3_5_11() {
        let w = GeneratorWord::new(vec![
            elem(1, xp(3, 3)),
            elem(2, xp(3, 5)),
            elem(3, &xp(1, 2) * &x(2)),
        ]);
        let map = w.realize().unwrap();
        assert_eq!(map.mdeg().as_positive(), Some([3, 5, 11]));
    }

    #[test]
    fn compose_with_identity() {
        let f = PolyMap::new([&x(1) + &xp(3, 3), x(2), x(3)]);
        assert_eq!(f.compose(&PolyMap::identity()).unwrap(), f);
        assert_eq!(PolyMap::identity().compose(&f).unwrap(), f);
    }

    #[test]
    fn compose_substitutes() {
        let f = PolyMap::new([x(1), &x(2) + &xp(1, 2), x(3)]);
        let g = PolyMap::new([&x(1) + &xp(3, 3), x(2), x(3)]);
        let fg = f.compose(&g).unwrap();
        let f1 = &x(1) + &xp(3, 3);
        assert_eq!(fg, PolyMap::new([f1.clone(), &x(2) + &f1.pow(2), x(3)]));
    }

    #[test]
    fn inverted_word_composes_to_identity() {
        let w = GeneratorWord::new(vec![elem(1, xp(2, 3)), elem(2, xp(1, 2))]);
        let inv = w.inverted().unwrap();
        assert_eq!(
            inv,
            GeneratorWord::new(vec![elem(2, -&xp(1, 2)), elem(1, -&xp(2, 3))])
        );
        let composed = w.realize().unwrap().compose(&inv.realize().unwrap()).unwrap();
        assert!(composed.is_identity());
    }

    #[test]
    fn invert_of_empty_is_empty() {
        assert_eq!(
            GeneratorWord::default().inverted().unwrap(),
            GeneratorWord::default()
        );
    }

    #[test]
    fn linear_generator_round_trip() {
        let mut matrix = zero_matrix3();
        matrix[0][1] = rat(1);
        matrix[1][0] = rat(2);
        matrix[2][2] = rat(1);
        let shift = [rat(1), rat(0), rat(-3)];
        let g = Generator::linear(matrix, shift).unwrap();
        let w = GeneratorWord::new(vec![g, elem(1, xp(2, 2))]);
        let composed = w
            .realize()
            .unwrap()
            .compose(&w.inverted().unwrap().realize().unwrap())
            .unwrap();
        assert!(composed.is_identity());
    }

    #[test]
    fn singular_linear_is_rejected() {
        assert!(Generator::linear(zero_matrix3(), zero_vector3()).is_err());
    }

    #[test]
    fn elementary_must_avoid_its_target() {
        assert!(Generator::elementary(Var::X1, &x(1) + &x(2)).is_err());
        assert!(Generator::elementary(Var::X1, Polynomial::one()).is_ok());
    }

    #[test]
    fn non_identity_map() {
        let f = PolyMap::new([&x(1) + &xp(3, 3), x(2), x(3)]);
        assert!(!f.is_identity());
    }

    #[test]
    fn mdeg_permutes_with_coordinates() {
        let f = PolyMap::new([&x(1) + &xp(2, 3), x(2), &x(3) + &xp(1, 5)]);
        let permuted = f.permute([2, 0, 1]);
        let d = f.mdeg().0;
        assert_eq!(permuted.mdeg().0, [d[2], d[0], d[1]]);
    }

    #[test]
    fn word_json_round_trip() {
        let mut matrix = zero_matrix3();
        matrix[0][0] = rat(1) / rat(2);
        matrix[1][2] = rat(1);
        matrix[2][1] = rat(-1);
        let w = GeneratorWord::new(vec![
            elem(1, xp(2, 3)),
            Generator::linear(matrix, [rat(0), rat(7), rat(0)]).unwrap(),
        ]);
        let s = serde_json::to_string(&w).unwrap();
        let back: GeneratorWord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn word_json_rejects_bad_generators() {
        let bad_target = r#"{"word":[{"elem":{"target":4,"g":{"terms":[]}}}]}"#;
        assert!(serde_json::from_str::<GeneratorWord>(bad_target).is_err());
        // addend involves the target variable
        let bad_addend =
            r#"{"word":[{"elem":{"target":1,"g":{"terms":[{"c":"1/1","e":[1,0,0]}]}}}]}"#;
        assert!(serde_json::from_str::<GeneratorWord>(bad_addend).is_err());
    }
}
