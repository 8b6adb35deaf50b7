//! Coordinates on homogeneous polynomial and vector-field spaces, and the
//! sparse operator rows of `f ↦ [Bx, f]` and `φ ↦ X_B(φ) - a·φ` on them.

use std::collections::HashMap;

use num_traits::Zero;

use crate::exactla::sparse::SparseVec;
use crate::exactla::{add_fast, mul_fast, rat, QMatrix, Rational};
use crate::polyalg::{monomials_of_degree, Monomial, Poly, VectorField};

/// Homogeneous degree-`k` polynomials in `n` variables, monomials in graded-lex order.
#[derive(Clone, Debug)]
pub(crate) struct PolySpace {
    pub n: usize,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl PolySpace {
    pub fn new(n: usize, k: u32) -> Self {
        let monomials = monomials_of_degree(n, k);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self { n, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &Monomial) -> usize {
        self.index[m]
    }

    pub fn to_poly(&self, coords: &[Rational]) -> Poly {
        Poly::from_terms(self.n, self.monomials.iter().cloned().zip(coords.iter().cloned()))
    }
}

/// Homogeneous degree-`k` fields; coordinate of `x^r e_ℓ` is `index(r)·n + ℓ`.
#[derive(Clone, Debug)]
pub(crate) struct FieldSpace {
    pub polys: PolySpace,
}

impl FieldSpace {
    pub fn new(n: usize, k: u32) -> Self {
        Self { polys: PolySpace::new(n, k) }
    }

    pub fn n(&self) -> usize {
        self.polys.n
    }

    pub fn len(&self) -> usize {
        self.polys.len() * self.n()
    }

    pub fn index_of(&self, m: &Monomial, l: usize) -> usize {
        self.polys.index_of(m) * self.n() + l
    }

    pub fn basis_element(&self, c: usize) -> (Monomial, usize) {
        (self.polys.monomials[c / self.n()].clone(), c % self.n())
    }

    pub fn to_field(&self, coords: &[Rational]) -> VectorField {
        let n = self.n();
        let mut comps = vec![Poly::zero(n); n];
        for (c, v) in coords.iter().enumerate() {
            if !v.is_zero() {
                let (m, l) = self.basis_element(c);
                comps[l].add_term(m, v.clone());
            }
        }
        VectorField::new(comps).expect("consistent arity")
    }

    /// Sparse coordinates of a homogeneous field of this degree.
    pub fn coords(&self, f: &VectorField) -> SparseVec {
        let mut out: Vec<(usize, Rational)> = Vec::new();
        for (l, comp) in f.components().iter().enumerate() {
            for (m, c) in comp.terms() {
                out.push((self.index_of(m, l), c.clone()));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

/// Sorts `image` by target and sums repeated targets, dropping zeros.
fn merge(mut image: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    image.sort_by_key(|(r, _)| *r);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(image.len());
    for (r, v) in image {
        match out.last_mut() {
            Some((last, acc)) if *last == r => *acc = add_fast(acc, &v),
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn push_column(rows: &mut [SparseVec], col: usize, image: Vec<(usize, Rational)>) {
    for (r, v) in merge(image) {
        rows[r].push((col, v));
    }
}

fn nonzero_entries(b: &QMatrix) -> Vec<(usize, usize, &Rational)> {
    let n = b.rows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, &b[(i, j)]))
        .filter(|(_, _, v)| !v.is_zero())
        .collect()
}

/// Image of `x^r` under `X_B`, as `(monomial index, coefficient)` pairs with
/// repeats. Diagonal entries keep the monomial and skip the index lookup.
fn derivative_image(
    entries: &[(usize, usize, &Rational)],
    space: &PolySpace,
    idx: usize,
    out: &mut Vec<(usize, Rational)>,
) {
    let m = &space.monomials[idx];
    for &(i, j, bij) in entries {
        let ri = m.exponents()[i];
        if ri == 0 {
            continue;
        }
        let target = if i == j { idx } else { space.index_of(&m.lower(i).expect("positive exponent").raise(j)) };
        let v = if ri == 1 { bij.clone() } else { mul_fast(bij, &rat(ri as i64)) };
        out.push((target, v));
    }
}

/// Rows of the matrix of `f ↦ [Bx, f] = Df·Bx - B·f` on `space`.
///
/// For `f = x^r e_ℓ`: `Df·Bx = Σ_{i,j} r_i B_ij x^{r-e_i+e_j} e_ℓ` and `B·f = Σ_m B_mℓ x^r e_m`.
pub(crate) fn bracket_rows(b: &QMatrix, space: &FieldSpace) -> Vec<SparseVec> {
    let n = space.n();
    let entries = nonzero_entries(b);
    let mut rows = vec![Vec::new(); space.len()];
    for idx in 0..space.polys.len() {
        let mut image = Vec::new();
        derivative_image(&entries, &space.polys, idx, &mut image);
        let image = merge(image);
        for l in 0..n {
            let mut col_image: Vec<(usize, Rational)> =
                image.iter().map(|(t, v)| (t * n + l, v.clone())).collect();
            for &(mm, ll, bml) in &entries {
                if ll == l {
                    col_image.push((idx * n + mm, -bml.clone()));
                }
            }
            push_column(&mut rows, idx * n + l, col_image);
        }
    }
    rows
}

/// Rows of the matrix of `φ ↦ X_B(φ) - shift·φ` on `space`.
pub(crate) fn derivative_rows(b: &QMatrix, shift: &Rational, space: &PolySpace) -> Vec<SparseVec> {
    let entries = nonzero_entries(b);
    let mut rows = vec![Vec::new(); space.len()];
    for col in 0..space.len() {
        let mut image = Vec::new();
        derivative_image(&entries, space, col, &mut image);
        if !shift.is_zero() {
            image.push((col, -shift.clone()));
        }
        push_column(&mut rows, col, image);
    }
    rows
}

/// Coordinates of a homogeneous polynomial of this degree.
#[cfg(test)]
pub(crate) fn poly_coords(space: &PolySpace, p: &Poly) -> SparseVec {
    let mut out: Vec<(usize, Rational)> = p.terms().map(|(m, c)| (space.index_of(m), c.clone())).collect();
    out.sort_by_key(|(i, _)| *i);
    out
}
