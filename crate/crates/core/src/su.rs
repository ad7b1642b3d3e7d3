//! Degree machinery for reductions of tame automorphisms: reduced-pair
//! classification, the composition degree lower bound, the degree-pattern
//! predicates for reduction types I-IV, and a bounded elementary-reduction
//! solver that searches for a bivariate `g` dropping one coordinate's degree.

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bivariate::{BiExp, Bivariate};
use crate::degree::Degree;
use crate::linalg;
use crate::poly::{
    alg_independent, homog_dependent, in_coefficient_algebra, Monomial, PolyError, Polynomial, Var,
};
use crate::automorphism::PolyMap;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SuError {
    #[error("expected deg f < deg g, got {deg_f} >= {deg_g}")]
    DegreeOrder { deg_f: u64, deg_g: u64 },
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("invalid search bounds: {0}")]
    BadBounds(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A permutation of `{1, 2, 3}`, stored as the images of 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct Perm([usize; 3]);

impl Perm {
    pub const ALL: [Perm; 6] = [
        Perm([1, 2, 3]),
        Perm([1, 3, 2]),
        Perm([2, 1, 3]),
        Perm([2, 3, 1]),
        Perm([3, 1, 2]),
        Perm([3, 2, 1]),
    ];

    pub fn new(images: [usize; 3]) -> Result<Perm, SuError> {
        let mut seen = [false; 3];
        for &v in &images {
            if !(1..=3).contains(&v) || seen[v - 1] {
                return Err(SuError::BadInput(format!(
                    "{images:?} is not a permutation of {{1, 2, 3}}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Perm(images))
    }

    /// `sigma(slot)` for `slot` in `1..=3`, 1-based on both sides.
    pub fn apply(&self, slot: usize) -> usize {
        self.0[slot - 1]
    }

    pub fn images(&self) -> [usize; 3] {
        self.0
    }
}

impl TryFrom<[usize; 3]> for Perm {
    type Error = String;

    fn try_from(images: [usize; 3]) -> Result<Self, Self::Error> {
        Perm::new(images).map_err(|e| e.to_string())
    }
}

impl From<Perm> for [usize; 3] {
    fn from(p: Perm) -> [usize; 3] {
        p.0
    }
}

/// Classification of an ordered pair `(f, g)` with `deg f < deg g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub deg_f: u64,
    pub deg_g: u64,
    /// `deg f / gcd(deg f, deg g)`, present exactly when the pair is *-reduced.
    pub p: Option<u64>,
    /// (i) `f, g` algebraically independent, (ii) top parts dependent,
    /// (iii) neither top part in the scalar algebra of the other.
    pub star_reduced: bool,
    /// Whether the top parts are algebraically independent.
    pub independent_tops: bool,
}

/// Tests the three reduced-pair conditions.
pub fn classify_pair(f: &Polynomial, g: &Polynomial) -> Result<PairClass, SuError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let deg_f = f.degree().as_finite().expect("nonzero") as u64;
    let deg_g = g.degree().as_finite().expect("nonzero") as u64;
    if deg_f >= deg_g {
        return Err(SuError::DegreeOrder { deg_f, deg_g });
    }

    let ftop = f.top_part()?;
    let gtop = g.top_part()?;
    let independent = alg_independent(f, g);
    let independent_tops = alg_independent(&ftop, &gtop);

    // A constant f fails (i) outright, and (ii)/(iii) are not defined for it.
    let star_reduced = if independent && deg_f >= 1 {
        homog_dependent(&ftop, &gtop)?
            && !in_coefficient_algebra(&ftop, &gtop)?
            && !in_coefficient_algebra(&gtop, &ftop)?
    } else {
        false
    };

    Ok(PairClass {
        deg_f,
        deg_g,
        p: star_reduced.then(|| deg_f / deg_f.gcd(&deg_g)),
        star_reduced,
        independent_tops,
    })
}

/// The instantiated composition lower bound
/// `deg G(f, g) >= q (p deg g - deg g - deg f + deg[f, g]) + r deg g`
/// for `deg_y G = p q + r`, `0 <= r < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub deg_f: u64,
    pub deg_g: u64,
    pub deg_y_g: u64,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub deg_bracket: i64,
    pub bound: i64,
}

impl BoundReport {
    /// Re-derives every stored field from `(deg_f, deg_g, p, deg_y_g,
    /// deg_bracket)` and checks the Euclidean identity `q*p + r = deg_y_g`.
    pub fn is_consistent(&self) -> bool {
        self.deg_f >= 1
            && self.deg_g >= 1
            && self.p >= 1
            && self.r < self.p
            && self.q * self.p + self.r == self.deg_y_g
            && self.bound == bound_value(self.p, self.q, self.r, self.deg_f, self.deg_g, self.deg_bracket)
    }
}

fn bound_value(p: u64, q: u64, r: u64, deg_f: u64, deg_g: u64, deg_bracket: i64) -> i64 {
    let coeff = (p * deg_g) as i64 - deg_g as i64 - deg_f as i64 + deg_bracket;
    q as i64 * coeff + (r * deg_g) as i64
}

/// Lower bound with `p = deg_f / gcd(deg_f, deg_g)` (requires `deg_f < deg_g`).
pub fn degree_lower_bound(
    deg_f: u64,
    deg_g: u64,
    deg_bracket: Degree,
    deg_y_g: u64,
) -> Result<BoundReport, SuError> {
    if deg_f == 0 || deg_g == 0 {
        return Err(SuError::BadInput("degrees must be positive".into()));
    }
    if deg_f >= deg_g {
        return Err(SuError::DegreeOrder { deg_f, deg_g });
    }
    degree_lower_bound_with_p(deg_f / deg_f.gcd(&deg_g), deg_f, deg_g, deg_bracket, deg_y_g)
}

/// Lower bound with an explicitly supplied `p >= 1`.
pub fn degree_lower_bound_with_p(
    p: u64,
    deg_f: u64,
    deg_g: u64,
    deg_bracket: Degree,
    deg_y_g: u64,
) -> Result<BoundReport, SuError> {
    if deg_f == 0 || deg_g == 0 || p == 0 {
        return Err(SuError::BadInput("degrees and p must be positive".into()));
    }
    let Some(br) = deg_bracket.as_finite() else {
        return Err(SuError::BadInput("bracket degree must be finite".into()));
    };
    let q = deg_y_g / p;
    let r = deg_y_g % p;
    Ok(BoundReport {
        deg_f,
        deg_g,
        deg_y_g,
        p,
        q,
        r,
        deg_bracket: br,
        bound: bound_value(p, q, r, deg_f, deg_g, br),
    })
}

/// Which reduction family a degree pattern belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionType {
    I,
    II,
    III,
    IV,
}

/// A degree-pattern hit: the permutation and parameters under which a
/// multidegree satisfies the preconditions of one reduction type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatch {
    pub type_tag: ReductionType,
    pub sigma: Perm,
    pub n: u64,
    /// Odd `s >= 3`; present for type I only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
}

/// Exhaustively enumerates all pattern hits over the six permutations.
///
/// Fractional bounds like `(3/2) n` are compared by cross-multiplication, so
/// every comparison is exact; `deg = (3/2) n` in type IV can only hold for
/// even `n` because the doubled form `2 deg = 3 n` forces it.
pub fn pattern_matches(d: [u64; 3]) -> Vec<PatternMatch> {
    debug_assert!(d.iter().all(|&v| v >= 1));
    let mut out = Vec::new();
    for sigma in Perm::ALL {
        let v1 = d[sigma.apply(1) - 1];
        let v2 = d[sigma.apply(2) - 1];
        let v3 = d[sigma.apply(3) - 1];
        if v1 % 2 != 0 || v1 == 0 {
            continue;
        }
        let n = v1 / 2;
        if n == 0 {
            continue;
        }

        // type I: deg F2 = n s (s >= 3 odd), 2n < deg F3 <= n s
        if v2 % n == 0 {
            let s = v2 / n;
            if s >= 3 && s % 2 == 1 && 2 * n < v3 && v3 <= n * s {
                out.push(PatternMatch {
                    type_tag: ReductionType::I,
                    sigma,
                    n,
                    s: Some(s),
                });
            }
        }
        // type II: deg F2 = 3n, (3/2) n < deg F3 <= 2n
        if v2 == 3 * n && 3 * n < 2 * v3 && v3 <= 2 * n {
            out.push(PatternMatch {
                type_tag: ReductionType::II,
                sigma,
                n,
                s: None,
            });
        }
        // type III: deg F2 = 3n, n < deg F3 <= (3/2) n
        if v2 == 3 * n && n < v3 && 2 * v3 <= 3 * n {
            out.push(PatternMatch {
                type_tag: ReductionType::III,
                sigma,
                n,
                s: None,
            });
        }
        // type IV: (5/2) n < deg F2 <= 3n, deg F3 = (3/2) n
        if 5 * n < 2 * v2 && v2 <= 3 * n && 2 * v3 == 3 * n {
            out.push(PatternMatch {
                type_tag: ReductionType::IV,
                sigma,
                n,
                s: None,
            });
        }
    }
    debug_assert!(out.iter().all(|m| pattern_match_holds(d, m)));
    out
}

/// Re-checks the defining inequalities of a match by direct evaluation.
pub fn pattern_match_holds(d: [u64; 3], m: &PatternMatch) -> bool {
    let v1 = d[m.sigma.apply(1) - 1];
    let v2 = d[m.sigma.apply(2) - 1];
    let v3 = d[m.sigma.apply(3) - 1];
    let n = m.n;
    if n == 0 || v1 != 2 * n {
        return false;
    }
    match m.type_tag {
        ReductionType::I => match m.s {
            Some(s) => s >= 3 && s % 2 == 1 && v2 == n * s && 2 * n < v3 && v3 <= n * s,
            None => false,
        },
        ReductionType::II => m.s.is_none() && v2 == 3 * n && 3 * n < 2 * v3 && v3 <= 2 * n,
        ReductionType::III => m.s.is_none() && v2 == 3 * n && n < v3 && 2 * v3 <= 3 * n,
        ReductionType::IV => {
            m.s.is_none() && 5 * n < 2 * v2 && v2 <= 3 * n && 2 * v3 == 3 * n
        }
    }
}

/// Searches for a bivariate `g` with `deg_x g <= max_deg_x`,
/// `deg_y g <= max_deg_y` such that
/// `deg(F_sigma(1) - g(F_sigma(2), F_sigma(3))) < deg F_sigma(1)`.
///
/// The coefficients of `g` are unknowns of an exact linear system requiring
/// every homogeneous component of degree >= deg F_sigma(1) in the difference
/// to vanish; a solution therefore certifies the strict drop by construction.
/// `None` means no `g` exists within the bounds, which is not a proof that
/// the coordinate is irreducible.
pub fn elementary_top_drop(
    map: &PolyMap,
    sigma: Perm,
    max_deg_x: u32,
    max_deg_y: u32,
    limit: usize,
) -> Result<Option<Bivariate>, SuError> {
    let nx = max_deg_x as usize + 1;
    let ny = max_deg_y as usize + 1;
    if nx.saturating_mul(ny) > 100_000 {
        return Err(SuError::BadBounds(format!(
            "search space of {} coefficients is too large",
            nx.saturating_mul(ny)
        )));
    }

    let coord = |slot: usize| map.coord(Var::from_index1(sigma.apply(slot)).expect("axis"));
    let target = coord(1);
    let a = coord(2);
    let b = coord(3);
    if target.is_zero() || a.is_zero() || b.is_zero() {
        return Err(SuError::BadInput("coordinates must be nonzero".into()));
    }
    let drop_below = target.degree().as_finite().expect("nonzero") as u64;

    // a^i b^j for all candidate exponents, built incrementally
    let mut apows = vec![Polynomial::one()];
    for _ in 0..max_deg_x {
        apows.push(apows.last().unwrap().try_mul(a, limit)?);
    }
    let mut products: Vec<(BiExp, Polynomial)> = Vec::with_capacity(nx * ny);
    for (i, ap) in apows.iter().enumerate() {
        let mut cur = ap.clone();
        products.push((BiExp::new(i as u32, 0), cur.clone()));
        for j in 1..=max_deg_y {
            cur = cur.try_mul(b, limit)?;
            products.push((BiExp::new(i as u32, j), cur.clone()));
        }
    }

    // Constraint rows: one per monomial of total degree >= deg(target)
    // appearing anywhere, in descending canonical order.
    let mut constraint_monos: std::collections::BTreeSet<Monomial> = std::collections::BTreeSet::new();
    let high_enough = |m: &Monomial| m.total_degree() >= drop_below;
    for (m, _) in target.terms().filter(|(m, _)| high_enough(m)) {
        constraint_monos.insert(*m);
    }
    for (_, p) in &products {
        for (m, _) in p.terms().filter(|(m, _)| high_enough(m)) {
            constraint_monos.insert(*m);
        }
    }

    let rows: Vec<Monomial> = constraint_monos.into_iter().rev().collect();
    let matrix: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|m| products.iter().map(|(_, p)| p.coeff(m)).collect())
        .collect();
    let rhs: Vec<BigRational> = rows.iter().map(|m| target.coeff(m)).collect();

    match linalg::solve(matrix, rhs) {
        None => Ok(None),
        Some(solution) => {
            let g = Bivariate::from_terms(
                products
                    .iter()
                    .map(|(e, _)| *e)
                    .zip(solution),
            );
            debug_assert!({
                let dropped = target - &g.eval(a, b, limit)?;
                dropped.degree() < Degree::Finite(drop_below as i64)
            });
            Ok(Some(g))
        }
    }
}

/// Default exponent caps for `elementary_top_drop` when the caller leaves
/// them open. The argument of larger degree is capped by the smallest power
/// count whose instantiated lower bound already exceeds the target degree
/// (with bracket floor 2); the other argument falls back to
/// `target / deg(arg)`.
pub fn default_search_bounds(deg_arg_x: u64, deg_arg_y: u64, target: u64) -> (u32, u32) {
    let raw = |d: u64| -> u32 {
        if d == 0 {
            0
        } else {
            (target / d) as u32
        }
    };
    if deg_arg_x == 0 || deg_arg_y == 0 {
        return (raw(deg_arg_x), raw(deg_arg_y));
    }
    let (lo, hi) = if deg_arg_x <= deg_arg_y {
        (deg_arg_x, deg_arg_y)
    } else {
        (deg_arg_y, deg_arg_x)
    };
    let p = lo / lo.gcd(&hi);
    let mut hi_cap = raw(hi);
    if p >= 2 {
        let scan_to = target / hi + p + 2;
        for m in 0..=scan_to {
            let report = degree_lower_bound_with_p(p, lo, hi, Degree::Finite(2), m)
                .expect("positive degrees");
            if report.bound > target as i64 {
                hi_cap = (m.saturating_sub(1)) as u32;
                break;
            }
        }
    }
    if deg_arg_x <= deg_arg_y {
        (raw(lo), hi_cap)
    } else {
        (hi_cap, raw(lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{Generator, GeneratorWord};
    use crate::poly::DEFAULT_TERM_LIMIT;

    fn x(i: usize) -> Polynomial {
        Polynomial::variable(Var::from_index1(i).unwrap())
    }

    fn xp(i: usize, e: u32) -> Polynomial {
        Polynomial::var_pow(Var::from_index1(i).unwrap(), e)
    }

    #[test]
    fn classify_star_reduced_pair() {
        // f = x1 + x2^2, g = x2^3 + x1 x2: tops x2^2, x2^3 are dependent and
        // neither is a scalar power of the other; the pair is independent.
        let f = &x(1) + &xp(2, 2);
        let g = &xp(2, 3) + &(&x(1) * &x(2));
        let c = classify_pair(&f, &g).unwrap();
        assert!(c.star_reduced);
        assert!(!c.independent_tops);
        assert_eq!(c.p, Some(2));
        assert_eq!((c.deg_f, c.deg_g), (2, 3));
    }

    #[test]
    fn classify_independent_tops() {
        let c = classify_pair(&x(1), &xp(2, 2)).unwrap();
        assert!(!c.star_reduced);
        assert!(c.independent_tops);
        assert_eq!(c.p, None);
    }

    #[test]
    fn classify_dependent_pair() {
        let c = classify_pair(&x(1), &xp(1, 2)).unwrap();
        assert!(!c.star_reduced);
        assert!(!c.independent_tops);
    }

    #[test]
    fn classify_requires_degree_order() {
        assert_eq!(
            classify_pair(&xp(1, 2), &x(2)),
            Err(SuError::DegreeOrder { deg_f: 2, deg_g: 1 })
        );
    }

    #[test]
    fn bound_examples() {
        let r = degree_lower_bound(3, 5, Degree::Finite(2), 3).unwrap();
        assert_eq!((r.p, r.q, r.r), (3, 1, 0));
        assert_eq!(r.bound, 9);
        assert!(r.is_consistent());

        let r = degree_lower_bound(3, 5, Degree::Finite(2), 1).unwrap();
        assert_eq!((r.q, r.r), (0, 1));
        assert_eq!(r.bound, 5);
        assert!(r.is_consistent());
    }

    #[test]
    fn bound_q_coefficient_with_bracket_floor() {
        // with deg_f = 3, deg_g = d2 and bracket 2 the q-coefficient is 2*d2 - 1
        for d2 in [4u64, 5, 7, 11] {
            let r = degree_lower_bound(3, d2, Degree::Finite(2), 3).unwrap();
            assert_eq!(r.bound, 2 * d2 as i64 - 1);
        }
    }

    #[test]
    fn bound_rejects_bad_input() {
        assert!(degree_lower_bound(0, 5, Degree::Finite(2), 1).is_err());
        assert!(degree_lower_bound(3, 5, Degree::NegInf, 1).is_err());
        assert!(degree_lower_bound(5, 3, Degree::Finite(2), 1).is_err());
        assert!(degree_lower_bound_with_p(0, 3, 5, Degree::Finite(2), 1).is_err());
    }

    #[test]
    fn pattern_4_6_5_is_exactly_one_type_i_hit() {
        let hits = pattern_matches([4, 6, 5]);
        assert_eq!(hits.len(), 1);
        let m = hits[0];
        assert_eq!(m.type_tag, ReductionType::I);
        assert_eq!(m.sigma.images(), [1, 2, 3]);
        assert_eq!((m.n, m.s), (2, Some(3)));
        assert!(pattern_match_holds([4, 6, 5], &m));
    }

    #[test]
    fn pattern_all_odd_triple_is_empty() {
        assert!(pattern_matches([3, 5, 7]).is_empty());
    }

    #[test]
    fn pattern_ones_are_empty() {
        assert!(pattern_matches([1, 1, 1]).is_empty());
    }

    #[test]
    fn pattern_type_iv_requires_even_n() {
        // (6, 8, 9): sigma = (1 -> 6): n = 3 odd, deg F3 = 9/2 not integral
        assert!(pattern_matches([6, 8, 9])
            .iter()
            .all(|m| m.type_tag != ReductionType::IV || m.n % 2 == 0));
        // (8, 11, 6): n = 4, (5/2)*4 = 10 < 11 <= 12, deg F3 = 6 = (3/2)*4
        let hits = pattern_matches([8, 11, 6]);
        assert!(hits
            .iter()
            .any(|m| m.type_tag == ReductionType::IV && m.n == 4));
    }

    #[test]
    fn top_drop_recovers_cubic() {
        let map = PolyMap::new([&x(1) + &xp(2, 3), x(2), x(3)]);
        let g = elementary_top_drop(&map, Perm::new([1, 2, 3]).unwrap(), 3, 3, DEFAULT_TERM_LIMIT)
            .unwrap()
            .expect("a drop exists");
        // g(x, y) = x^3 with x bound to F2
        let dropped = &(&x(1) + &xp(2, 3)) - &g.eval(&x(2), &x(3), DEFAULT_TERM_LIMIT).unwrap();
        assert_eq!(dropped.degree(), 1);
    }

    #[test]
    fn top_drop_none_for_identity() {
        // no polynomial in the other two coordinates can cancel a variable
        let map = PolyMap::identity();
        for sigma in Perm::ALL {
            let got =
                elementary_top_drop(&map, sigma, 2, 2, DEFAULT_TERM_LIMIT).unwrap();
            assert!(got.is_none());
        }
    }

    #[test]
    fn top_drop_recovers_witness_pivot() {
        // realize the (3, 5, 11) witness and reduce its third coordinate
        let word = GeneratorWord::new(vec![
            Generator::elementary(Var::X1, xp(3, 3)).unwrap(),
            Generator::elementary(Var::X2, xp(3, 5)).unwrap(),
            Generator::elementary(Var::X3, &xp(1, 2) * &x(2)).unwrap(),
        ]);
        let map = word.realize().unwrap();
        assert_eq!(map.mdeg().as_positive(), Some([3, 5, 11]));
        let g = elementary_top_drop(&map, Perm::new([3, 1, 2]).unwrap(), 2, 1, DEFAULT_TERM_LIMIT)
            .unwrap()
            .expect("construction is recoverable");
        let dropped = &map.coords()[2]
            - &g.eval(&map.coords()[0], &map.coords()[1], DEFAULT_TERM_LIMIT)
                .unwrap();
        assert!(dropped.degree() < Degree::Finite(11));
    }

    #[test]
    fn top_drop_rejects_huge_bounds() {
        let map = PolyMap::identity();
        let err = elementary_top_drop(
            &map,
            Perm::new([1, 2, 3]).unwrap(),
            1000,
            1000,
            DEFAULT_TERM_LIMIT,
        )
        .unwrap_err();
        assert!(matches!(err, SuError::BadBounds(_)));
    }

    #[test]
    fn default_bounds_use_feasibility_cut() {
        // pair degrees (3, 5), target 9: bound(2) = 10 > 9 excludes deg_y = 2
        let (bx, by) = default_search_bounds(3, 5, 9);
        assert_eq!(by, 1);
        assert_eq!(bx, 3);
        // swapped argument order moves the cut to the x slot
        let (bx, by) = default_search_bounds(5, 3, 9);
        assert_eq!(bx, 1);
        assert_eq!(by, 3);
    }

    #[test]
    fn perm_validation() {
        assert!(Perm::new([1, 2, 3]).is_ok());
        assert!(Perm::new([1, 1, 3]).is_err());
        assert!(Perm::new([0, 2, 3]).is_err());
        assert_eq!(Perm::new([2, 3, 1]).unwrap().apply(1), 2);
    }
}
