//! Sparse row echelon elimination.
//!
//! The operators assembled for centralizers and invariants have a handful of
//! nonzeros per row (exactly one for diagonal algebras), so the dense
//! routines would spend nearly all their time on zeros.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{add_fast, mul_fast, normalize_leading, Rational};

/// Sorted `(column, value)` pairs with no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a - factor·b`, merged in column order.
fn sub_scaled(a: &SparseVec, factor: &Rational, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -mul_fast(factor, &b[j].1)));
            j += 1;
        } else {
            let v = add_fast(&a[i].1, &-mul_fast(factor, &b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// An echelon basis of a row space, grown one row at a time.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Remainder of `row` after eliminating every pivot column; zero iff
    /// `row` lies in the current row space.
    pub fn reduce(&self, mut row: SparseVec) -> SparseVec {
        let mut pos = 0;
        while pos < row.len() {
            let (c, v) = row[pos].clone();
            match self.rows.get(&c) {
                Some(pivot) => row = sub_scaled(&row, &v, pivot),
                None => pos += 1,
            }
        }
        row
    }

    /// Adds `row`; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        let mut row = row;
        while let Some((c, v)) = row.first().cloned() {
            match self.rows.get(&c) {
                Some(pivot) => row = sub_scaled(&row, &v, pivot),
                None => {
                    if row.len() == 1 {
                        row[0].1 = Rational::one();
                    } else if !v.is_one() {
                        let inv = v.recip();
                        for (_, x) in row.iter_mut() {
                            *x = &*x * &inv;
                        }
                    }
                    self.rows.insert(c, row);
                    return true;
                }
            }
        }
        false
    }

    /// Null space of the accumulated rows, with the same conventions as the
    /// dense [`kernel_basis`](super::kernel_basis): one vector per free column,
    /// leading entry 1.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let reduced = self.reduced_rows();
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !reduced.contains_key(c)) {
            let mut v = vec![Rational::zero(); self.ncols];
            v[free] = Rational::one();
            for (&p, row) in &reduced {
                if p > free {
                    break;
                }
                if let Ok(k) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v[p] = -row[k].1.clone();
                }
            }
            normalize_leading(&mut v);
            out.push(v);
        }
        out
    }

    fn reduced_rows(&self) -> BTreeMap<usize, SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut row = row.clone();
            let mut pos = 1;
            while pos < row.len() {
                let (c, v) = row[pos].clone();
                match done.get(&c) {
                    Some(pivot) => row = sub_scaled(&row, &v, pivot),
                    None => pos += 1,
                }
            }
            done.insert(p, row);
        }
        done
    }
}

/// Null space of the matrix whose rows are given sparsely.
pub fn sparse_kernel(rows: impl IntoIterator<Item = SparseVec>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut ech = SparseEchelon::new(ncols);
    for r in rows {
        ech.insert(r);
    }
    ech.kernel()
}
