//! Matrix Lie algebras: bracket closure, structure constants, derived series
//! and the diagonal data read off diagonal or upper-triangular bases.

use num_traits::Zero;

use crate::error::{CentraError, Result};
use crate::exactla::sparse::{from_dense, SparseEchelon};
use crate::exactla::{solve, QMatrix, Rational};

/// A Lie subalgebra of `gl(n)` given by a linearly independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    n: usize,
    basis: Vec<QMatrix>,
    /// `[B_i, B_j] = Σ_k structure[i][j][k] B_k` (matrix commutator).
    structure: Vec<Vec<Vec<Rational>>>,
}

/// Linear forms `ρ_i(B) = B_ii` on the basis of a diagonal or upper-triangular algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalProfile {
    /// `forms[i][j] = ρ_i(B_j)`.
    pub forms: Vec<Vec<Rational>>,
    /// True when every basis matrix is diagonal, not just triangular.
    pub diagonal: bool,
    /// The basis the forms were read from, kept for verifying triangular candidates.
    pub basis: Vec<QMatrix>,
}

/// Picks a maximal linearly independent subset in first-seen order.
fn independent_subset(n: usize, mats: impl IntoIterator<Item = QMatrix>) -> Vec<QMatrix> {
    let mut ech = SparseEchelon::new(n * n);
    mats.into_iter().filter(|m| ech.insert(from_dense(m.entries()))).collect()
}

fn coordinates(n: usize, basis: &[QMatrix], m: &QMatrix) -> Option<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.entries().to_vec()).collect();
    let a = QMatrix::from_columns(n * n, &cols);
    solve(&a, m.entries())
}

impl LieAlgebra {
    /// Smallest commutator-closed subspace containing `generators`.
    pub fn bracket_closure(generators: &[QMatrix], cap: usize) -> Result<Self> {
        let n = match generators.first() {
            Some(g) => g.rows(),
            None => return Err(CentraError::Invalid("no generators; pass a zero matrix for the zero algebra".into())),
        };
        Self::closure_in(n, generators, cap)
    }

    /// Like [`bracket_closure`](Self::bracket_closure) but with an explicit ambient
    /// dimension, so an empty generator list gives the zero algebra.
    pub fn closure_in(n: usize, generators: &[QMatrix], cap: usize) -> Result<Self> {
        for g in generators {
            if !g.is_square() || g.rows() != n {
                return Err(CentraError::DimensionMismatch { expected: n, found: g.rows() });
            }
        }
        let mut ech = SparseEchelon::new(n * n);
        let mut basis: Vec<QMatrix> = Vec::new();
        for g in generators {
            if ech.insert(from_dense(g.entries())) {
                basis.push(g.clone());
                if basis.len() > cap {
                    return Err(CentraError::ClosureCapExceeded { cap, partial: basis });
                }
            }
        }
        // Every pair (i, j) with j < i and i >= `done` still needs its commutator.
        let mut done = 0;
        while done < basis.len() {
            let i = done;
            for j in 0..i {
                let c = basis[i].commutator(&basis[j]);
                if ech.insert(from_dense(c.entries())) {
                    basis.push(c);
                    if basis.len() > cap {
                        return Err(CentraError::ClosureCapExceeded { cap, partial: basis });
                    }
                }
            }
            done += 1;
        }
        let structure = Self::structure_constants(n, &basis)?;
        Ok(Self { n, basis, structure })
    }

    fn structure_constants(n: usize, basis: &[QMatrix]) -> Result<Vec<Vec<Vec<Rational>>>> {
        let d = basis.len();
        let mut table = vec![vec![vec![Rational::zero(); d]; d]; d];
        for i in 0..d {
            for j in (i + 1)..d {
                let c = basis[i].commutator(&basis[j]);
                let coords = coordinates(n, basis, &c)
                    .ok_or_else(|| CentraError::Internal("commutator left the closed span".into()))?;
                for k in 0..d {
                    table[j][i][k] = -coords[k].clone();
                    table[i][j][k] = coords[k].clone();
                }
            }
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    pub fn structure_constants_table(&self) -> &[Vec<Vec<Rational>>] {
        &self.structure
    }

    /// Coordinates of `m` in the basis, if `m` belongs to the algebra.
    pub fn coordinates_of(&self, m: &QMatrix) -> Option<Vec<Rational>> {
        if self.basis.is_empty() {
            return m.is_zero().then(Vec::new);
        }
        coordinates(self.n, &self.basis, m)
    }

    pub fn combination(&self, coeffs: &[Rational]) -> QMatrix {
        assert_eq!(coeffs.len(), self.dim());
        self.basis
            .iter()
            .zip(coeffs)
            .fold(QMatrix::zeros(self.n, self.n), |acc, (b, c)| &acc + &b.scale(c))
    }

    /// Basis of `[S, S]` for a subspace given by a basis.
    fn derived(n: usize, space: &[QMatrix]) -> Vec<QMatrix> {
        let mut brackets = Vec::new();
        for i in 0..space.len() {
            for j in (i + 1)..space.len() {
                brackets.push(space[i].commutator(&space[j]));
            }
        }
        independent_subset(n, brackets)
    }

    /// Dimensions along the derived series, starting with `dim M`, until it
    /// stabilizes or reaches zero.
    pub fn derived_series(&self) -> Vec<usize> {
        let mut dims = vec![self.dim()];
        let mut current = self.basis.clone();
        while !current.is_empty() {
            let next = Self::derived(self.n, &current);
            let stalled = next.len() == current.len();
            dims.push(next.len());
            if stalled {
                break;
            }
            current = next;
        }
        dims
    }

    /// Solvable iff the derived series reaches `{0}`; the series is the witness.
    pub fn is_solvable(&self) -> (bool, Vec<usize>) {
        let series = self.derived_series();
        (series.last() == Some(&0), series)
    }

    /// `[M, M] = M`.
    pub fn is_perfect(&self) -> bool {
        Self::derived(self.n, &self.basis).len() == self.dim()
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().flatten().flatten().all(Zero::is_zero)
    }

    fn profile(&self, diagonal: bool) -> DiagonalProfile {
        let forms = (0..self.n)
            .map(|i| self.basis.iter().map(|b| b[(i, i)].clone()).collect())
            .collect();
        DiagonalProfile { forms, diagonal, basis: self.basis.clone() }
    }

    /// Present iff every basis matrix is diagonal.
    pub fn diagonal_profile(&self) -> Option<DiagonalProfile> {
        self.basis.iter().all(QMatrix::is_diagonal).then(|| self.profile(true))
    }

    /// Present iff every basis matrix is upper triangular.
    pub fn triangular_profile(&self) -> Option<DiagonalProfile> {
        if let Some(p) = self.diagonal_profile() {
            return Some(p);
        }
        self.basis.iter().all(QMatrix::is_upper_triangular).then(|| self.profile(false))
    }

    /// Checks antisymmetry and the Jacobi identity of the structure constants.
    pub fn check_jacobi(&self) -> bool {
        let d = self.dim();
        let c = &self.structure;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return false;
                    }
                }
            }
        }
        // Σ_m c_ij^m c_mk^l + c_jk^m c_mi^l + c_ki^m c_mj^l = 0
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = Rational::zero();
                        for m in 0..d {
                            s += &c[i][j][m] * &c[m][k][l];
                            s += &c[j][k][m] * &c[m][i][l];
                            s += &c[k][i][m] * &c[m][j][l];
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Standard algebras used in examples and tests.
pub mod stock {
    use super::*;

    pub const CAP: usize = 64;

    pub fn so2() -> LieAlgebra {
        LieAlgebra::bracket_closure(&[QMatrix::from_i64(&[[0, -1], [1, 0]])], CAP).expect("closed")
    }

    pub fn sl2() -> LieAlgebra {
        LieAlgebra::bracket_closure(
            &[QMatrix::from_i64(&[[0, 1], [0, 0]]), QMatrix::from_i64(&[[0, 0], [1, 0]])],
            CAP,
        )
        .expect("closed")
    }

    pub fn diagonal(rows: &[&[i64]]) -> LieAlgebra {
        let n = rows.first().map_or(0, |r| r.len());
        let gens: Vec<QMatrix> = rows.iter().map(|r| QMatrix::diag_i64(r)).collect();
        LieAlgebra::closure_in(n, &gens, CAP).expect("abelian")
    }

    /// `span{diag(-1,2,3), diag(-1,-1,0)}`.
    pub fn example_pair() -> LieAlgebra {
        diagonal(&[&[-1, 2, 3], &[-1, -1, 0]])
    }

    pub fn euler(n: usize) -> LieAlgebra {
        LieAlgebra::closure_in(n, &[QMatrix::identity(n)], CAP).expect("abelian")
    }

    pub fn zero(n: usize) -> LieAlgebra {
        LieAlgebra::closure_in(n, &[], CAP).expect("zero")
    }
}
