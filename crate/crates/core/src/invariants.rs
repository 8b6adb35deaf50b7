//! Invariants `I_0(M)` and relative invariants `I_α(M)` of a matrix Lie algebra,
//! computed degree by degree, plus the monomial and resonance-lattice shortcuts
//! available for diagonal and triangular algebras.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{CentraError, Result};
use crate::exactla::sparse::SparseEchelon;
use crate::exactla::{rat, Rational};
use crate::graded::{derivative_rows, PolySpace};
use crate::liealg::{DiagonalProfile, LieAlgebra};
use crate::polyalg::{lie_derivative, monomials_of_degree, Monomial, Poly};

/// A linear form `α` on `M`, given by its values `α(B_i)` on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(pub Vec<Rational>);

impl LinearForm {
    pub fn zero(dim: usize) -> Self {
        LinearForm(vec![Rational::zero(); dim])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

fn joint_kernel(m: &LieAlgebra, alpha: &LinearForm, k: u32) -> Vec<Poly> {
    let space = PolySpace::new(m.n(), k);
    let mut ech = SparseEchelon::new(space.len());
    for (b, a) in m.basis().iter().zip(&alpha.0) {
        for row in derivative_rows(b, a, &space) {
            if !row.is_empty() {
                ech.insert(row);
            }
        }
    }
    ech.kernel().iter().map(|v| space.to_poly(v)).collect()
}

/// Basis of the homogeneous degree-`k` polynomials with `X_B(φ) = 0` for all `B ∈ M`.
pub fn invariant_space(m: &LieAlgebra, k: u32) -> Vec<Poly> {
    joint_kernel(m, &LinearForm::zero(m.dim()), k)
}

/// Basis of the homogeneous degree-`k` `φ` with `X_{B_i}(φ) = α(B_i)·φ` for every basis element.
pub fn relative_invariant_space(m: &LieAlgebra, alpha: &LinearForm, k: u32) -> Result<Vec<Poly>> {
    CentraError::check_dim(m.dim(), alpha.0.len())?;
    Ok(joint_kernel(m, alpha, k))
}

/// Re-checks the defining eigen-equation of a relative invariant.
pub fn is_relative_invariant(m: &LieAlgebra, alpha: &LinearForm, phi: &Poly) -> Result<bool> {
    CentraError::check_dim(m.dim(), alpha.0.len())?;
    for (b, a) in m.basis().iter().zip(&alpha.0) {
        if lie_derivative(b, phi)? != phi.scale(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn weight(profile: &DiagonalProfile, d: &Monomial) -> Vec<Rational> {
    let dim = profile.forms.first().map_or(profile.basis.len(), Vec::len);
    let mut w = vec![Rational::zero(); dim];
    for (e, form) in d.exponents().iter().zip(&profile.forms) {
        if *e == 0 {
            continue;
        }
        for (wj, rho) in w.iter_mut().zip(form) {
            *wj += rho * rat(*e as i64);
        }
    }
    w
}

fn confirm(profile: &DiagonalProfile, alpha: &LinearForm, d: &Monomial) -> bool {
    if profile.diagonal {
        return true;
    }
    let psi = Poly::term(d.nvars(), d.clone(), rat(1));
    profile
        .basis
        .iter()
        .zip(&alpha.0)
        .all(|(b, a)| lie_derivative(b, &psi).is_ok_and(|x| x == psi.scale(a)))
}

/// Exponent vectors `d >= 0` with `Σ d_i = k` and `Σ d_i ρ_i = α`.
///
/// For a triangular (non-diagonal) profile the diagonal condition only yields
/// candidates; each is kept only if `x^d` satisfies the eigen-equation for the
/// full matrices.
pub fn monomial_relative_invariants(profile: &DiagonalProfile, alpha: &LinearForm, k: u32) -> Vec<Monomial> {
    let n = profile.forms.len();
    monomials_of_degree(n, k)
        .into_iter()
        .filter(|d| weight(profile, d) == alpha.0)
        .filter(|d| confirm(profile, alpha, d))
        .collect()
}

/// Every degree-`k` monomial grouped by its weight `Σ d_i ρ_i`, i.e. all the
/// admissible `α` together with their monomial relative invariants.
pub fn monomial_weights(profile: &DiagonalProfile, k: u32) -> BTreeMap<LinearForm, Vec<Monomial>> {
    let mut out: BTreeMap<LinearForm, Vec<Monomial>> = BTreeMap::new();
    for d in monomials_of_degree(profile.forms.len(), k) {
        let alpha = LinearForm(weight(profile, &d));
        if confirm(profile, &alpha, &d) {
            out.entry(alpha).or_default().push(d);
        }
    }
    out
}

/// `ψ_l / ψ_k` as a monomial when it is a polynomial (exponentwise `≥`).
pub fn monomial_ratio(numerator: &Monomial, denominator: &Monomial) -> Option<Monomial> {
    numerator.div(denominator)
}

/// Nonnegative integer relations `m·σ = 0` up to a degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceLattice {
    #[serde(with = "crate::exactla::serde_rational_vec")]
    pub spectrum: Vec<Rational>,
    pub degree_bound: u32,
    pub solutions: Vec<Vec<u32>>,
    pub primitive_generator: Option<Vec<u32>>,
    pub simple: bool,
}

/// Enumerates every nonzero `m >= 0` with `|m| <= degree_bound` and `Σ m_i σ_i = 0`.
/// The lattice is simple when all solutions are multiples of the lowest-degree one.
pub fn resonance_lattice(sigma: &[Rational], degree_bound: u32) -> ResonanceLattice {
    let n = sigma.len();
    let mut solutions = Vec::new();
    for k in 1..=degree_bound {
        for m in monomials_of_degree(n, k) {
            let dot: Rational = m.exponents().iter().zip(sigma).map(|(e, s)| s * rat(*e as i64)).sum();
            if dot.is_zero() {
                solutions.push(m.exponents().to_vec());
            }
        }
    }
    let generator = solutions.first().cloned();
    let simple = match &generator {
        None => true,
        Some(g) => solutions.iter().all(|s| is_multiple(s, g)),
    };
    ResonanceLattice {
        spectrum: sigma.to_vec(),
        degree_bound,
        primitive_generator: if simple { generator } else { None },
        simple,
        solutions,
    }
}

fn is_multiple(s: &[u32], g: &[u32]) -> bool {
    let Some(i) = g.iter().position(|&x| x != 0) else {
        return false;
    };
    if !s[i].is_multiple_of(g[i]) {
        return false;
    }
    let t = s[i] / g[i];
    s.iter().zip(g).all(|(a, b)| *a == t * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::stock;
    use crate::exactla::QMatrix;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn invariant_space_examples() {
        assert_eq!(invariant_space(&stock::sl2(), 0), vec![Poly::one(2)]);
        assert_eq!(invariant_space(&stock::so2(), 2), vec![Poly::parse(2, "x1^2 + x2^2").unwrap()]);
        let m = stock::diagonal(&[&[1, 2]]);
        for k in 1..6 {
            assert!(invariant_space(&m, k).is_empty());
        }
    }

    #[test]
    fn relative_invariant_examples() {
        let so2 = stock::so2();
        let zero = LinearForm::zero(1);
        assert_eq!(relative_invariant_space(&so2, &zero, 2).unwrap(), invariant_space(&so2, 2));
        let hyper = stock::diagonal(&[&[1, -1]]);
        assert_eq!(
            relative_invariant_space(&hyper, &LinearForm(vec![rat(1)]), 1).unwrap(),
            vec![Poly::var(2, 0)]
        );
        let sl2 = stock::sl2();
        for alpha in [vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(2), rat(-1)], vec![rat(0), rat(0), rat(3)]] {
            for k in 1..4 {
                assert!(relative_invariant_space(&sl2, &LinearForm(alpha.clone()), k).unwrap().is_empty());
            }
        }
        assert!(relative_invariant_space(&sl2, &LinearForm(vec![rat(1)]), 1).is_err());
    }

    #[test]
    fn monomial_method_examples() {
        let p = stock::diagonal(&[&[1, -1]]).diagonal_profile().unwrap();
        assert_eq!(monomial_relative_invariants(&p, &LinearForm::zero(1), 2), vec![mono(&[1, 1])]);
        let p = stock::diagonal(&[&[1, 2]]).diagonal_profile().unwrap();
        assert!(monomial_relative_invariants(&p, &LinearForm::zero(1), 3).is_empty());
        let p = stock::example_pair().diagonal_profile().unwrap();
        for k in 1..7 {
            assert!(monomial_relative_invariants(&p, &LinearForm::zero(2), k).is_empty());
        }
    }

    #[test]
    fn triangular_candidates_are_confirmed() {
        // B = [[1,1],[0,2]]: X_B(x1) = x1 + x2 is not an eigenvector even though ρ_1 = 1.
        let m = LieAlgebra::bracket_closure(&[QMatrix::from_i64(&[[1, 1], [0, 2]])], 4).unwrap();
        let p = m.triangular_profile().unwrap();
        assert!(monomial_relative_invariants(&p, &LinearForm(vec![rat(1)]), 1).is_empty());
        // x2 is an eigenvector with eigenvalue 2.
        assert_eq!(monomial_relative_invariants(&p, &LinearForm(vec![rat(2)]), 1), vec![mono(&[0, 1])]);
        assert_eq!(relative_invariant_space(&m, &LinearForm(vec![rat(2)]), 1).unwrap(), vec![Poly::var(2, 1)]);
    }

    #[test]
    fn resonance_examples() {
        let l = resonance_lattice(&[rat(1), rat(-1)], 6);
        assert_eq!(l.solutions, vec![vec![1, 1], vec![2, 2], vec![3, 3]]);
        assert!(l.simple);
        assert_eq!(l.primitive_generator, Some(vec![1, 1]));
        let l = resonance_lattice(&[rat(1), rat(2)], 6);
        assert!(l.solutions.is_empty() && l.simple && l.primitive_generator.is_none());
        let l = resonance_lattice(&[rat(1), rat(-1), rat(0)], 4);
        assert!(l.solutions.contains(&vec![1, 1, 0]) && l.solutions.contains(&vec![0, 0, 1]));
        assert!(!l.simple);
    }

    #[test]
    fn monomial_ratio_divisibility() {
        assert_eq!(monomial_ratio(&mono(&[2, 3]), &mono(&[1, 1])), Some(mono(&[1, 2])));
        assert_eq!(monomial_ratio(&mono(&[2, 0]), &mono(&[1, 1])), None);
    }
}
