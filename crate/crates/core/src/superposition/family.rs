use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::equivariance::is_equivariant;
use crate::error::{CentraError, Result};
use crate::exactla::sparse::{to_dense, SparseEchelon};
use crate::exactla::{solve, QMatrix, Rational};
use crate::graded::FieldSpace;
use crate::liealg::LieAlgebra;
use crate::polyalg::{directional, VectorField};

/// Homogeneous centralizer fields closed under `u ↦ Du·p` for every seed `p`.
#[derive(Clone, Debug)]
pub struct ClosedFamily {
    n: usize,
    algebra: LieAlgebra,
    fields: Vec<VectorField>,
    degrees: Vec<u32>,
    seeds: Vec<usize>,
    table: Vec<Vec<Vec<Rational>>>,
}

impl ClosedFamily {
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    /// Positions of the seeds inside `fields`.
    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    /// `table[i][j][k]`: coefficient of `fields[k]` in `directional(fields[i], seed j)`.
    pub fn table(&self) -> &[Vec<Vec<Rational>>] {
        &self.table
    }

    /// Re-derives every table row by exact polynomial arithmetic.
    pub fn verify(&self) -> Result<bool> {
        for (i, u) in self.fields.iter().enumerate() {
            if !is_equivariant(&self.algebra, u)? {
                return Ok(false);
            }
            for (j, &s) in self.seeds.iter().enumerate() {
                let lhs = directional(u, &self.fields[s])?;
                let mut rhs = VectorField::zero(self.n);
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        if self.degrees[k] <= self.degrees[i] {
                            return Ok(false);
                        }
                        rhs = rhs.add(&self.fields[k].scale(c))?;
                    }
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

struct DegreeSlot {
    space: FieldSpace,
    echelon: SparseEchelon,
    members: Vec<usize>,
}

/// Smallest family containing `seeds` and closed under `directional(·, seed)`.
///
/// Seeds must be homogeneous of degree at least 2, equivariant and linearly
/// independent. Fails with `FamilyCapExceeded` once more than `cap` fields are
/// needed.
pub fn close_family(m: &LieAlgebra, seeds: &[VectorField], cap: usize) -> Result<ClosedFamily> {
    close_bounded(m, seeds, cap, None)
}

/// As [`close_family`], failing with `DegreeBoundExceeded` as soon as a member
/// of degree above `max_degree` is required.
pub(crate) fn close_bounded(
    m: &LieAlgebra,
    seeds: &[VectorField],
    cap: usize,
    max_degree: Option<u32>,
) -> Result<ClosedFamily> {
    let n = m.n();
    let mut slots: BTreeMap<u32, DegreeSlot> = BTreeMap::new();
    let mut fields: Vec<VectorField> = Vec::new();
    let mut degrees = Vec::new();
    let mut queue = VecDeque::new();

    let mut admit = |f: VectorField, k: u32, fields: &mut Vec<VectorField>, degrees: &mut Vec<u32>| -> Result<bool> {
        if let Some(bound) = max_degree.filter(|&b| k > b) {
            return Err(CentraError::DegreeBoundExceeded { bound });
        }
        let slot = slots.entry(k).or_insert_with(|| {
            let space = FieldSpace::new(n, k);
            let echelon = SparseEchelon::new(space.len());
            DegreeSlot { space, echelon, members: Vec::new() }
        });
        if !slot.echelon.insert(slot.space.coords(&f)) {
            return Ok(false);
        }
        if fields.len() >= cap {
            return Err(CentraError::FamilyCapExceeded { cap });
        }
        slot.members.push(fields.len());
        fields.push(f);
        degrees.push(k);
        Ok(true)
    };

    for (index, s) in seeds.iter().enumerate() {
        CentraError::check_dim(n, s.dim())?;
        let k = match s.homogeneous_degree() {
            Some(k) if k >= 2 => k,
            _ => return Err(CentraError::Invalid(format!("seed {index} is not homogeneous of degree at least 2"))),
        };
        if !is_equivariant(m, s)? {
            return Err(CentraError::NotEquivariant { index });
        }
        if !admit(s.clone(), k, &mut fields, &mut degrees)? {
            return Err(CentraError::Invalid(format!("seed {index} is linearly dependent on earlier seeds")));
        }
        queue.push_back(fields.len() - 1);
    }
    let seed_positions: Vec<usize> = (0..seeds.len()).collect();

    while let Some(i) = queue.pop_front() {
        for &s in &seed_positions {
            let w = directional(&fields[i], &fields[s])?;
            if w.is_zero() {
                continue;
            }
            let k = degrees[i] + degrees[s] - 1;
            if !w.is_homogeneous(k) {
                return Err(CentraError::Internal("directional product lost homogeneity".into()));
            }
            if admit(w, k, &mut fields, &mut degrees)? {
                let new = fields.len() - 1;
                if !is_equivariant(m, &fields[new])? {
                    return Err(CentraError::Internal("directional product left the centralizer".into()));
                }
                queue.push_back(new);
            }
        }
    }

    let mut table = Vec::with_capacity(fields.len());
    for i in 0..fields.len() {
        let mut row = Vec::with_capacity(seed_positions.len());
        for &s in &seed_positions {
            let mut coeffs = vec![Rational::zero(); fields.len()];
            let w = directional(&fields[i], &fields[s])?;
            if !w.is_zero() {
                let slot = &slots[&(degrees[i] + degrees[s] - 1)];
                let len = slot.space.len();
                let columns: Vec<Vec<Rational>> =
                    slot.members.iter().map(|&k| to_dense(&slot.space.coords(&fields[k]), len)).collect();
                let a = QMatrix::from_columns(len, &columns);
                let x = solve(&a, &to_dense(&slot.space.coords(&w), len))
                    .ok_or_else(|| CentraError::Internal("family is not closed".into()))?;
                for (&k, c) in slot.members.iter().zip(x) {
                    coeffs[k] = c;
                }
            }
            row.push(coeffs);
        }
        table.push(row);
    }

    Ok(ClosedFamily { n, algebra: m.clone(), fields, degrees, seeds: seed_positions, table })
}

/// One right-hand-side term `σ(t) e^{rate·t} p_seed(x)`; `sigma` lists the
/// polynomial coefficients of `σ` from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdeTerm {
    pub seed: usize,
    #[serde(with = "crate::exactla::serde_rational_vec")]
    pub sigma: Vec<Rational>,
    #[serde(with = "crate::exactla::serde_rational")]
    pub rate: Rational,
}

/// `ẋ = Σ σ_j(t) e^{α_j t} p_j(x)` over the seeds of a closed family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EDESystem {
    pub terms: Vec<EdeTerm>,
}

impl EDESystem {
    pub fn check_against(&self, family: &ClosedFamily) -> Result<()> {
        for t in &self.terms {
            if t.seed >= family.seeds().len() {
                return Err(CentraError::Invalid(format!(
                    "term references seed {} but the family has {} seeds",
                    t.seed,
                    family.seeds().len()
                )));
            }
        }
        Ok(())
    }

    pub fn is_autonomous(&self) -> bool {
        self.terms.iter().all(|t| t.rate.is_zero() && t.sigma.iter().skip(1).all(Zero::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;
    use crate::liealg::stock;

    fn vf(c: &[&str]) -> VectorField {
        VectorField::parse(c).unwrap()
    }

    #[test]
    fn spec_examples() {
        let f = close_family(&stock::diagonal(&[&[1, 2]]), &[vf(&["0", "x1^2"])], 10).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.table()[0][0].iter().all(Zero::is_zero));
        let f = close_family(&stock::example_pair(), &[vf(&["0", "x1*x3", "0"])], 10).unwrap();
        assert_eq!(f.len(), 1);
        let f = close_family(&stock::so2(), &[], 10).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn closure_adds_products() {
        let m = stock::diagonal(&[&[1, 2, 3]]);
        let seeds = [vf(&["0", "x1^2", "x1*x2"])];
        let f = close_family(&m, &seeds, 10).unwrap();
        // D(0, x1^2, x1x2)·(0, x1^2, x1x2) = (0, 0, x1^3)
        assert_eq!(f.len(), 2);
        assert_eq!(f.fields()[1], vf(&["0", "0", "x1^3"]));
        assert_eq!(f.table()[0][0], vec![rat(0), rat(1)]);
        assert!(f.verify().unwrap());
    }

    #[test]
    fn rejects_bad_seeds() {
        let m = stock::diagonal(&[&[1, 2]]);
        assert!(matches!(close_family(&m, &[vf(&["x2^2", "0"])], 5), Err(CentraError::NotEquivariant { index: 0 })));
        assert!(matches!(close_family(&m, &[vf(&["x1", "0"])], 5), Err(CentraError::Invalid(_))));
        assert!(matches!(
            close_family(&m, &[vf(&["0", "x1^2"]), vf(&["0", "2*x1^2"])], 5),
            Err(CentraError::Invalid(_))
        ));
    }

    #[test]
    fn cap_is_enforced_for_infinite_centralizers() {
        // For so(2), (x1^2+x2^2)·(x1, x2) generates ever higher degrees.
        let seed = vf(&["x1^3 + x1*x2^2", "x1^2*x2 + x2^3"]);
        assert!(matches!(close_family(&stock::so2(), &[seed], 6), Err(CentraError::FamilyCapExceeded { cap: 6 })));
    }

    #[test]
    fn system_validation() {
        let f = close_family(&stock::diagonal(&[&[1, 2]]), &[vf(&["0", "x1^2"])], 10).unwrap();
        let ok = EDESystem { terms: vec![EdeTerm { seed: 0, sigma: vec![rat(1)], rate: rat(0) }] };
        assert!(ok.check_against(&f).is_ok() && ok.is_autonomous());
        let bad = EDESystem { terms: vec![EdeTerm { seed: 1, sigma: vec![rat(1)], rate: rat(0) }] };
        assert!(bad.check_against(&f).is_err());
        let json = serde_json::to_string(&ok).unwrap();
        assert_eq!(json, r#"{"terms":[{"seed":0,"sigma":["1"],"rate":"0"}]}"#);
    }
}
