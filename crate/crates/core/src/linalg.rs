//! Exact Gauss-Jordan elimination over the rationals.

use num_rational::BigRational;
use num_traits::Zero;

/// Solves `A x = b` exactly. Returns one solution with every free variable
/// set to zero, or `None` if the system is inconsistent. Pivot selection is
/// first-nonzero in scan order, so the result is deterministic.
pub(crate) fn solve(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    debug_assert_eq!(nrows, b.len());

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);

        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        b[row] *= &inv;

        for r in 0..nrows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut a[r][col], BigRational::zero());
            for c in col + 1..ncols {
                if !a[row][c].is_zero() {
                    let delta = &a[row][c] * &factor;
                    a[r][c] -= delta;
                }
            }
            let delta = &b[row] * &factor;
            b[r] -= delta;
        }

        pivots.push((row, col));
        row += 1;
        if row == nrows {
            break;
        }
    }

    // Any remaining row is all-zero on the left; a nonzero right side there
    // means the system has no solution.
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }

    let mut x = vec![BigRational::zero(); ncols];
    for (r, c) in pivots {
        x[c] = b[r].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect()
    }

    #[test]
    fn solves_unique_system() {
        let a = mat(&[&[2, 1], &[1, -1]]);
        let b = vec![rat(5), rat(1)];
        let x = solve(a, b).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        let b = vec![rat(1), rat(3)];
        assert!(solve(a, b).is_none());
    }

    #[test]
    fn underdetermined_sets_free_variables_to_zero() {
        let a = mat(&[&[1, 1, 0]]);
        let b = vec![rat(4)];
        let x = solve(a, b).unwrap();
        assert_eq!(x, vec![rat(4), rat(0), rat(0)]);
    }

    #[test]
    fn exact_fractions() {
        let a = mat(&[&[3]]);
        let b = vec![rat(1)];
        let x = solve(a, b).unwrap();
        assert_eq!(x, vec![BigRational::new(BigInt::from(1), BigInt::from(3))]);
    }
}
