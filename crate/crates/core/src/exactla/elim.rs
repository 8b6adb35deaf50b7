use num_traits::{One, Zero};

use super::{normalize_leading, QMatrix, Rational};

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: QMatrix,
}

/// Gauss–Jordan elimination. The pivot in each column is the first nonzero
/// entry at or below the current row, so output is deterministic.
pub fn rref(m: &QMatrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].recip();
        if !inv.is_one() {
            for x in a.row_mut(r)[c..].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row: Vec<Rational> = a.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for (x, p) in a.row_mut(i)[c..].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { rank: pivots.len(), pivots, reduced: a }
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).rank
}

/// Basis of the null space, one vector per free column in increasing column
/// order, each scaled so that its first nonzero entry is 1.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    let Rref { pivots, reduced, .. } = rref(m);
    kernel_from_rref(&reduced, &pivots)
}

pub(crate) fn kernel_from_rref(reduced: &QMatrix, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let cols = reduced.cols();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -reduced[(row, free)].clone();
            }
            normalize_leading(&mut v);
            v
        })
        .collect()
}

/// One exact solution of `m·v = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let cols = m.cols();
    let mut aug = QMatrix::zeros(m.rows(), cols + 1);
    for i in 0..m.rows() {
        for j in 0..cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let Rref { pivots, reduced, .. } = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut v = vec![Rational::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        v[p] = reduced[(row, cols)].clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn rref_examples() {
        let id = rref(&QMatrix::identity(2));
        assert_eq!((id.rank, id.pivots.clone()), (2, vec![0, 1]));
        let z = rref(&QMatrix::zeros(2, 2));
        assert_eq!((z.rank, z.pivots.len()), (0, 0));
        let r = rref(&QMatrix::from_i64(&[[1, 2], [2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.reduced, QMatrix::from_i64(&[[1, 2], [0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&QMatrix::identity(3)).is_empty());
        let k = kernel_basis(&QMatrix::from_i64(&[[1, 2], [2, 4]]));
        // normalized proportional to (-2, 1)
        assert_eq!(k, vec![vec![rat(1), ratio(-1, 2)]]);
        assert_eq!(kernel_basis(&QMatrix::zeros(2, 3)).len(), 3);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&QMatrix::identity(2), &[rat(3), rat(5)]), Some(vec![rat(3), rat(5)]));
        let m = QMatrix::from_i64(&[[1, 2], [2, 4]]);
        assert_eq!(solve(&m, &[rat(1), rat(3)]), None);
        let v = solve(&m, &[rat(1), rat(2)]).unwrap();
        assert_eq!(&v[0] + rat(2) * &v[1], rat(1));
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |vals| {
                let entries = vals.into_iter().map(|(n, d)| ratio(n, d)).collect();
                QMatrix::new(r, c, entries).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(m in small_matrix()) {
            let k = kernel_basis(&m);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
        }

        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let once = rref(&m);
            let twice = rref(&once.reduced);
            prop_assert_eq!(once.reduced, twice.reduced);
            prop_assert_eq!(once.pivots, twice.pivots);
        }

        #[test]
        fn solve_reproduces_consistent_rhs(m in small_matrix(), seed in prop::collection::vec(-3i64..4, 6)) {
            let x: Vec<Rational> = (0..m.cols()).map(|i| rat(seed[i % seed.len()])).collect();
            let b = m.mul_vec(&x);
            let v = solve(&m, &b).expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&v), b);
        }
    }
}
