//! Exact Gaussian elimination over the rationals.

use num::{One, Zero};

use crate::algebra::Rational;

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A solution with every free variable set to zero.
    Solved { x: Vec<Rational>, rank: usize, pivots: Vec<usize> },
    Inconsistent { rank: usize },
}

/// Solve `A x = b` exactly. Pivot columns are chosen left to right, so the
/// returned solution is supported on the earliest independent columns.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Solution {
    assert_eq!(a.len(), b.len(), "row count must match right-hand side");
    let mut rows: Vec<(Vec<Rational>, Rational)> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            assert_eq!(r.len(), cols, "ragged matrix");
            (r.clone(), v.clone())
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = Rational::one() / rows[rank].0[col].clone();
        {
            let (r, v) = &mut rows[rank];
            for x in r.iter_mut().skip(col) {
                *x *= &inv;
            }
            *v *= &inv;
        }
        let (pivot_row, pivot_rhs) = rows[rank].clone();
        for (i, (r, v)) in rows.iter_mut().enumerate() {
            if i == rank || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, y) in r.iter_mut().zip(&pivot_row).skip(col) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
            *v -= &factor * &pivot_rhs;
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    if rows[rank..].iter().any(|(_, v)| !v.is_zero()) {
        return Solution::Inconsistent { rank };
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i].1.clone();
    }
    Solution::Solved { x, rank, pivots }
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n, "matrix must be square");
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(col, p);
        let inv = Rational::one() / aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        let pivot = aug[col].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Rational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn solves_square_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![int(3), int(5)];
        match solve(&a, &b, 2) {
            Solution::Solved { x, rank, .. } => {
                assert_eq!(rank, 2);
                assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &[int(1), int(3)], 2), Solution::Inconsistent { rank: 1 });
    }

    #[test]
    fn free_variables_are_zero() {
        let a = m(&[&[1, 1, 0]]);
        match solve(&a, &[int(2)], 3) {
            Solution::Solved { x, pivots, .. } => {
                assert_eq!(pivots, vec![0]);
                assert_eq!(x, vec![int(2), int(0), int(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn singular_has_no_inverse() {
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(v in proptest::collection::vec(-5i64..6, 9)) {
            let a: Vec<Vec<Rational>> = v.chunks(3).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            if let Some(inv) = inverse(&a) {
                let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
                prop_assert_eq!(mat_mul(&a, &inv), id.clone());
                prop_assert_eq!(mat_mul(&inv, &a), id);
            }
        }

        #[test]
        fn solutions_satisfy_system(v in proptest::collection::vec(-4i64..5, 12), b in proptest::collection::vec(-4i64..5, 3)) {
            let a: Vec<Vec<Rational>> = v.chunks(4).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let b: Vec<Rational> = b.into_iter().map(int).collect();
            if let Solution::Solved { x, .. } = solve(&a, &b, 4) {
                for (row, rhs) in a.iter().zip(&b) {
                    let s: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
                    prop_assert_eq!(&s, rhs);
                }
            }
        }
    }
}
