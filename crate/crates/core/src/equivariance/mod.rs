//! Graded centralizers `C(M) = {f : [f, M] = 0}` and finiteness verdicts.
//!
//! A field `f` is equivariant when `[Bx, f] = 0` for every basis matrix `B`.
//! Degree by degree this is the joint kernel of linear operators on the
//! coefficient space of homogeneous fields, whose coordinates are the monomial
//! fields `x^r e_ℓ` in graded-lex order of `r`, then `ℓ`.

mod feasibility;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CentraError, Result};
use crate::exactla::sparse::{SparseEchelon, SparseVec};
use crate::exactla::{rat, Rational};
use crate::graded::{bracket_rows, FieldSpace};
use crate::invariants::invariant_space;
use crate::liealg::LieAlgebra;
use crate::polyalg::{directional, lie_bracket, lie_derivative, Poly, VectorField};

pub use feasibility::positive_combination;

/// Bases of the homogeneous equivariant fields of each degree `0..=max_degree`.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub algebra: LieAlgebra,
    pub per_degree: BTreeMap<u32, Vec<VectorField>>,
}

impl GradedBasis {
    pub fn max_stored_degree(&self) -> Option<u32> {
        self.per_degree.keys().next_back().copied()
    }

    pub fn dims(&self) -> BTreeMap<u32, usize> {
        self.per_degree.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    /// Highest stored degree with a nonzero field.
    pub fn top_nonzero_degree(&self) -> Option<u32> {
        self.per_degree.iter().rev().find(|(_, v)| !v.is_empty()).map(|(k, _)| *k)
    }

    fn fields(&self) -> impl Iterator<Item = (u32, usize, &VectorField)> {
        self.per_degree
            .iter()
            .flat_map(|(k, v)| v.iter().enumerate().map(move |(i, f)| (*k, i, f)))
    }
}

/// `[Bx, f] = 0` for every basis matrix `B` of `m`.
pub fn is_equivariant(m: &LieAlgebra, f: &VectorField) -> Result<bool> {
    CentraError::check_dim(m.n(), f.dim())?;
    for b in m.basis() {
        if !lie_bracket(&VectorField::linear(b), f)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of the homogeneous degree-`k` fields commuting with every element of `m`.
pub fn equivariant_space(m: &LieAlgebra, k: u32) -> Vec<VectorField> {
    let space = FieldSpace::new(m.n(), k);
    let mut ech = SparseEchelon::new(space.len());
    for b in m.basis() {
        for row in bracket_rows(b, &space) {
            if !row.is_empty() {
                ech.insert(row);
            }
        }
    }
    ech.kernel().iter().map(|v| space.to_field(v)).collect()
}

/// `C(M)` truncated at degree `max_degree`, degrees computed in parallel.
pub fn centralizer_up_to(m: &LieAlgebra, max_degree: u32) -> GradedBasis {
    let per_degree = (0..=max_degree)
        .into_par_iter()
        .map(|k| (k, equivariant_space(m, k)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    GradedBasis { algebra: m.clone(), per_degree }
}

/// A pair `(p, q)` identified by `(degree, index)` within a [`GradedBasis`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldPair {
    pub p: (u32, usize),
    pub q: (u32, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub pairs_checked: usize,
    pub violations: Vec<FieldPair>,
}

fn span_echelons(g: &GradedBasis) -> BTreeMap<u32, (FieldSpace, SparseEchelon)> {
    g.per_degree
        .iter()
        .map(|(k, fields)| {
            let space = FieldSpace::new(g.algebra.n(), *k);
            let mut ech = SparseEchelon::new(space.len());
            for f in fields {
                ech.insert(space.coords(f));
            }
            (*k, (space, ech))
        })
        .collect()
}

/// Checks that `Dp·q` stays in the stored span for every stored pair whose
/// product degree `deg p + deg q - 1` is within the stored range.
pub fn check_directional_closure(g: &GradedBasis) -> Result<ClosureReport> {
    let Some(top) = g.max_stored_degree() else {
        return Ok(ClosureReport { pairs_checked: 0, violations: Vec::new() });
    };
    let spans = span_echelons(g);
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for (dp, ip, p) in g.fields() {
        for (dq, iq, q) in g.fields() {
            let target = dp as i64 + dq as i64 - 1;
            if target > top as i64 {
                continue;
            }
            pairs_checked += 1;
            let w = directional(p, q)?;
            if w.is_zero() {
                continue;
            }
            let in_span = match spans.get(&(target.max(0) as u32)) {
                Some((space, ech)) if w.is_homogeneous(target as u32) => ech.reduce(space.coords(&w)).is_empty(),
                _ => false,
            };
            if !in_span {
                violations.push(FieldPair { p: (dp, ip), q: (dq, iq) });
            }
        }
    }
    Ok(ClosureReport { pairs_checked, violations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotencyReport {
    /// Certified upper bound on the degree of centralizer elements.
    pub certified_bound: u32,
    /// Maximal degree actually attained, `d`.
    pub max_degree: u32,
    pub vacuous: bool,
    pub pairs_checked: usize,
    pub violations: Vec<FieldPair>,
}

/// Verifies `Dp·q = 0` for all homogeneous centralizer elements with
/// `deg p + deg q > d + 1`, where `d` is the maximal degree in `C(M)`.
pub fn nilpotency_witness(g: &GradedBasis, verdict: &FinitenessVerdict) -> Result<NilpotencyReport> {
    let FinitenessVerdict::FiniteCertified { max_degree: bound, .. } = verdict else {
        return Err(CentraError::NotFiniteCertified);
    };
    let bound = *bound;
    let mut full = g.clone();
    for k in 0..=bound {
        full.per_degree.entry(k).or_insert_with(|| equivariant_space(&g.algebra, k));
    }
    full.per_degree.retain(|k, _| *k <= bound);
    let d = full.top_nonzero_degree().unwrap_or(0);
    let mut report = NilpotencyReport {
        certified_bound: bound,
        max_degree: d,
        vacuous: d <= 1,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    if report.vacuous {
        return Ok(report);
    }
    for (dp, ip, p) in full.fields() {
        for (dq, iq, q) in full.fields() {
            if dp + dq <= d + 1 {
                continue;
            }
            report.pairs_checked += 1;
            if !directional(p, q)?.is_zero() {
                report.violations.push(FieldPair { p: (dp, ip), q: (dq, iq) });
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteCertificate {
    pub witness: Poly,
    /// Powers `m` for which `φ^m·E` was verified equivariant.
    pub powers_checked: Vec<u32>,
    pub passed: bool,
}

/// Checks that `phi` is a nonconstant invariant and that `φ^m·E` is
/// equivariant for `m = 1..=checks`.
pub fn infinite_certificate(m: &LieAlgebra, phi: &Poly, checks: u32) -> Result<InfiniteCertificate> {
    CentraError::check_dim(m.n(), phi.nvars())?;
    if phi.is_constant() {
        return Err(CentraError::ConstantWitness);
    }
    for b in m.basis() {
        if !lie_derivative(b, phi)?.is_zero() {
            return Err(CentraError::NotInvariant);
        }
    }
    let euler = VectorField::identity(m.n());
    let mut passed = true;
    let mut powers_checked = Vec::new();
    for power in 1..=checks {
        let f = euler.mul_poly(&phi.pow(power))?;
        passed &= is_equivariant(m, &f)?;
        powers_checked.push(power);
    }
    Ok(InfiniteCertificate { witness: phi.clone(), powers_checked, passed })
}

/// Outcome of the finiteness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinitenessVerdict {
    /// A nonconstant invariant exists, so `φ^m·E` gives infinitely many independent fields.
    InfiniteCertified { witness: Poly },
    /// The diagonal combination `Σ c_j B_j = diag(spectrum)` has entries of one
    /// strict sign, which bounds every equivariant degree by `max_degree`.
    FiniteCertified { max_degree: u32, combination: Vec<Rational>, spectrum: Vec<Rational> },
    /// Neither certificate found up to `searched_bound`.
    Undetermined { searched_bound: u32 },
}

impl FinitenessVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::InfiniteCertified { .. } => "InfiniteCertified",
            Self::FiniteCertified { .. } => "FiniteCertified",
            Self::Undetermined { .. } => "Undetermined",
        }
    }

    /// Re-checks the certificate against `m` without trusting how it was found.
    pub fn verify(&self, m: &LieAlgebra) -> Result<bool> {
        match self {
            Self::InfiniteCertified { witness } => Ok(infinite_certificate(m, witness, 3)?.passed),
            Self::FiniteCertified { max_degree, combination, spectrum } => {
                if combination.len() != m.dim() {
                    return Ok(false);
                }
                let c = m.combination(combination);
                let same_sign = spectrum.iter().all(Signed::is_positive) || spectrum.iter().all(Signed::is_negative);
                Ok(c.is_diagonal()
                    && c.diagonal() == *spectrum
                    && !spectrum.is_empty()
                    && same_sign
                    && *max_degree == degree_bound(spectrum))
            }
            Self::Undetermined { .. } => Ok(true),
        }
    }
}

/// `floor(max|σ| / min|σ|)` for a spectrum of one strict sign.
pub fn degree_bound(spectrum: &[Rational]) -> u32 {
    let abs: Vec<Rational> = spectrum.iter().map(Signed::abs).collect();
    let max = abs.iter().max().cloned().unwrap_or_else(Rational::zero);
    let min = abs.iter().min().cloned().unwrap_or_else(|| rat(1));
    use num_traits::ToPrimitive;
    (max / min).floor().to_integer().to_u32().unwrap_or(u32::MAX)
}

/// (a) a nonconstant invariant up to `search_bound` certifies infinite dimension;
/// (b) a diagonal basis with a same-sign combination certifies finite dimension;
/// (c) otherwise the question stays open.
pub fn finiteness_report(m: &LieAlgebra, search_bound: u32) -> FinitenessVerdict {
    for k in 1..=search_bound {
        if let Some(phi) = invariant_space(m, k).into_iter().next() {
            return FinitenessVerdict::InfiniteCertified { witness: phi };
        }
    }
    if let Some(profile) = m.diagonal_profile() {
        if let Some(c) = positive_combination(&profile.forms, m.dim()) {
            let spectrum = m.combination(&c).diagonal();
            return FinitenessVerdict::FiniteCertified { max_degree: degree_bound(&spectrum), combination: c, spectrum };
        }
    }
    FinitenessVerdict::Undetermined { searched_bound: search_bound }
}

/// Sparse coordinates of a homogeneous field of degree `k`; exposed for reports.
pub fn field_coordinates(n: usize, k: u32, f: &VectorField) -> SparseVec {
    FieldSpace::new(n, k).coords(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::QMatrix;
    use crate::liealg::stock;

    fn vf(s: &[&str]) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    #[test]
    fn equivariant_space_examples() {
        assert_eq!(equivariant_space(&stock::euler(3), 1).len(), 9);
        assert!(equivariant_space(&stock::euler(3), 2).is_empty());
        let hyper = stock::diagonal(&[&[1, -1]]);
        assert_eq!(equivariant_space(&hyper, 3), vec![vf(&["x1^2*x2", "0"]), vf(&["0", "x1*x2^2"])]);
    }

    #[test]
    fn centralizer_examples() {
        let g = centralizer_up_to(&stock::diagonal(&[&[1, 2]]), 4);
        assert_eq!(g.dims().into_iter().collect::<Vec<_>>(), vec![(0, 0), (1, 2), (2, 1), (3, 0), (4, 0)]);
        assert_eq!(g.per_degree[&1], vec![vf(&["x1", "0"]), vf(&["0", "x2"])]);
        assert_eq!(g.per_degree[&2], vec![vf(&["0", "x1^2"])]);
        let z = centralizer_up_to(&stock::zero(2), 2);
        assert_eq!(z.dims().into_iter().collect::<Vec<_>>(), vec![(0, 2), (1, 4), (2, 6)]);
        assert_eq!(centralizer_up_to(&stock::so2(), 3).per_degree[&3].len(), 2);
    }

    #[test]
    fn computed_fields_are_equivariant() {
        for alg in [stock::so2(), stock::sl2(), stock::example_pair(), stock::diagonal(&[&[1, -1]])] {
            let g = centralizer_up_to(&alg, 4);
            for fields in g.per_degree.values() {
                for f in fields {
                    assert!(is_equivariant(&alg, f).unwrap());
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let lin = GradedBasis {
            algebra: stock::so2(),
            per_degree: [(1, equivariant_space(&stock::so2(), 1))].into_iter().collect(),
        };
        assert!(check_directional_closure(&lin).unwrap().violations.is_empty());
        assert_eq!(directional(&vf(&["0", "x1^2"]), &vf(&["x1", "0"])).unwrap(), vf(&["0", "2*x1^2"]));
        let g = centralizer_up_to(&stock::diagonal(&[&[1, -1]]), 3);
        let report = check_directional_closure(&g).unwrap();
        assert!(report.violations.is_empty());
        assert!(report.pairs_checked > 0);
    }

    #[test]
    fn closure_detects_a_planted_violation() {
        let mut g = centralizer_up_to(&stock::diagonal(&[&[1, 2]]), 3);
        // x2^2 e1 is not equivariant: D(x2^2 e1)·(x1^2 e2) = 2x1^2x2 e1, and degree 3 is empty.
        g.per_degree.get_mut(&2).unwrap().push(vf(&["x2^2", "0"]));
        assert!(!check_directional_closure(&g).unwrap().violations.is_empty());
    }

    #[test]
    fn nilpotency_examples() {
        let m = stock::diagonal(&[&[1, 2]]);
        let verdict = finiteness_report(&m, 4);
        let g = centralizer_up_to(&m, 2);
        let r = nilpotency_witness(&g, &verdict).unwrap();
        assert_eq!((r.max_degree, r.vacuous, r.pairs_checked), (2, false, 1));
        assert!(r.violations.is_empty());
        let e = stock::euler(2);
        let r = nilpotency_witness(&centralizer_up_to(&e, 1), &finiteness_report(&e, 3)).unwrap();
        assert!(r.vacuous);
        let so2 = stock::so2();
        assert!(matches!(
            nilpotency_witness(&centralizer_up_to(&so2, 2), &finiteness_report(&so2, 2)),
            Err(CentraError::NotFiniteCertified)
        ));
    }

    #[test]
    fn infinite_certificate_examples() {
        let r2 = Poly::parse(2, "x1^2 + x2^2").unwrap();
        let cert = infinite_certificate(&stock::so2(), &r2, 3).unwrap();
        assert!(cert.passed);
        assert_eq!(cert.powers_checked, vec![1, 2, 3]);
        assert!(matches!(infinite_certificate(&stock::so2(), &Poly::one(2), 3), Err(CentraError::ConstantWitness)));
        let psi = Poly::parse(2, "x1*x2").unwrap();
        assert!(infinite_certificate(&stock::diagonal(&[&[1, -1]]), &psi, 3).unwrap().passed);
        assert!(matches!(infinite_certificate(&stock::so2(), &psi, 3), Err(CentraError::NotInvariant)));
    }

    #[test]
    fn finiteness_examples() {
        let pair = stock::example_pair();
        let v = finiteness_report(&pair, 6);
        match &v {
            FinitenessVerdict::FiniteCertified { spectrum, .. } => {
                assert!(spectrum.iter().all(Signed::is_positive) || spectrum.iter().all(Signed::is_negative));
            }
            other => panic!("expected finite, got {other:?}"),
        }
        assert!(v.verify(&pair).unwrap());
        assert_eq!(
            finiteness_report(&stock::so2(), 4),
            FinitenessVerdict::InfiniteCertified { witness: Poly::parse(2, "x1^2 + x2^2").unwrap() }
        );
        match finiteness_report(&stock::diagonal(&[&[1, 2]]), 4) {
            FinitenessVerdict::FiniteCertified { max_degree, .. } => assert_eq!(max_degree, 2),
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn undetermined_when_certificates_are_out_of_reach() {
        // Mixed signs with no same-sign combination; the only invariants are
        // powers of x1^6*x2^3*x3, of degree 10.
        let pair = stock::diagonal(&[&[1, -2, 0], &[0, 1, -3]]);
        assert_eq!(finiteness_report(&pair, 6), FinitenessVerdict::Undetermined { searched_bound: 6 });
        assert!(matches!(finiteness_report(&pair, 10), FinitenessVerdict::InfiniteCertified { .. }));
        // A Jordan block has no invariants, but the finite certificate needs a diagonal basis.
        let jordan = LieAlgebra::bracket_closure(&[QMatrix::from_i64(&[[1, 1], [0, 1]])], 8).unwrap();
        assert_eq!(finiteness_report(&jordan, 3), FinitenessVerdict::Undetermined { searched_bound: 3 });
    }

    #[test]
    fn finite_bound_is_sound_beyond_bound() {
        for alg in [stock::example_pair(), stock::diagonal(&[&[1, 2]]), stock::euler(3), stock::diagonal(&[&[2, 3, 5]])] {
            if let FinitenessVerdict::FiniteCertified { max_degree, .. } = finiteness_report(&alg, 4) {
                for k in max_degree + 1..=max_degree + 3 {
                    assert!(equivariant_space(&alg, k).is_empty());
                }
            } else {
                panic!("expected finite certificate");
            }
        }
    }
}
