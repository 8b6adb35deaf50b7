use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::equivariance::is_equivariant;
use crate::error::{CentraError, Result};
use crate::exactla::sparse::{from_dense, to_dense, SparseEchelon, SparseVec};
use crate::exactla::spectrum::SpectralSplit;
use crate::exactla::{solve, QMatrix, Rational};
use crate::graded::{bracket_rows, FieldSpace};
use crate::liealg::LieAlgebra;
use crate::polyalg::{homogeneous_components, VectorField};

use super::exppoly::{ExpPoly, ExpPolyVec};
use super::family::{close_bounded, ClosedFamily, EDESystem, EdeTerm};
use super::solve::solve_elementary;

/// `ẋ = Bx + q̃(x)` rewritten through `x = e^{tB} z` as an elementary system in `z`.
#[derive(Clone, Debug)]
pub struct ChenReduction {
    pub linear: QMatrix,
    pub family: ClosedFamily,
    pub system: EDESystem,
    /// `transport[i][j]` is the `(i, j)` entry of `e^{tB}`.
    pub transport: Vec<Vec<ExpPoly>>,
}

impl ChenReduction {
    /// Solves the original system with `x(t0) = y`.
    pub fn solve(&self, y: &[Rational], t0: &Rational) -> Result<ExpPolyVec> {
        let n = self.linear.rows();
        CentraError::check_dim(n, y.len())?;
        let mut at_t0 = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                at_t0[(i, j)] = self.transport[i][j].eval_exact(t0).ok_or_else(|| {
                    CentraError::Unsupported("transport has no exact value at the initial time".into())
                })?;
            }
        }
        let z0 = solve(&at_t0, y).ok_or_else(|| CentraError::Internal("transport is singular".into()))?;
        let z = solve_elementary(&self.family, &self.system, &z0, t0)?;
        Ok(self.apply_transport(&z))
    }

    /// `e^{tB} z(t)`.
    pub fn apply_transport(&self, z: &ExpPolyVec) -> ExpPolyVec {
        let components = self
            .transport
            .iter()
            .map(|row| row.iter().zip(&z.components).fold(ExpPoly::zero(), |acc, (t, zj)| acc.add(&t.mul(zj))))
            .collect();
        ExpPolyVec { components }
    }

    pub fn transport_f64(&self, t: f64) -> Vec<Vec<f64>> {
        self.transport.iter().map(|row| row.iter().map(|e| e.eval_f64(t)).collect()).collect()
    }

    /// Right-hand side of the reduced system at `(t, z)`.
    pub fn reduced_rhs_f64(&self, t: f64, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; z.len()];
        for term in &self.system.terms {
            let s: f64 = ExpPoly::polynomial(&term.sigma).eval_f64(t) * (crate::exactla::to_f64(&term.rate) * t).exp();
            let p = &self.family.fields()[self.family.seeds()[term.seed]];
            for (o, v) in out.iter_mut().zip(p.eval_f64(z)) {
                *o += s * v;
            }
        }
        out
    }
}

fn apply_rows(rows: &[SparseVec], v: &[Rational]) -> Vec<Rational> {
    rows.iter()
        .map(|row| row.iter().fold(Rational::zero(), |acc, (c, x)| acc + x * &v[*c]))
        .collect()
}

/// Terms `(rate, power, g)` with `exp(t·ad) f = Σ e^{rate·t} t^power g` for homogeneous `f`.
fn exp_ad_terms(b: &QMatrix, f: &VectorField, k: u32) -> Result<Vec<(Rational, u32, VectorField)>> {
    let space = FieldSpace::new(f.dim(), k);
    let len = space.len();
    let rows = bracket_rows(b, &space);
    let mut krylov: Vec<Vec<Rational>> = Vec::new();
    let mut echelon = SparseEchelon::new(len);
    let mut v = to_dense(&space.coords(f), len);
    loop {
        if !echelon.insert(from_dense(&v)) {
            break;
        }
        krylov.push(v.clone());
        v = apply_rows(&rows, &v);
    }
    let d = krylov.len();
    let basis = QMatrix::from_columns(len, &krylov);
    let last = solve(&basis, &v).ok_or_else(|| CentraError::Internal("Krylov space is not invariant".into()))?;
    let mut companion = QMatrix::zeros(d, d);
    for j in 0..d.saturating_sub(1) {
        companion[(j + 1, j)] = Rational::one();
    }
    for (i, c) in last.into_iter().enumerate() {
        companion[(i, d - 1)] = c;
    }
    let split = SpectralSplit::new(&companion)?;
    let mut start = vec![Rational::zero(); d];
    start[0] = Rational::one();
    Ok(split
        .exp_action(&start)
        .into_iter()
        .map(|term| {
            let coords = basis.mul_vec(&term.vector);
            (term.rate, term.power, space.to_field(&coords))
        })
        .collect())
}

/// Reduces `ẋ = q(x)` for an equivariant `q` with `q(0) = 0` to an elementary
/// system via `x = e^{tB} z`, where `B` is the linear part of `q`.
///
/// The reduced right-hand side `e^{-tB} q̃(e^{tB} z) = exp(t ad_B) q̃` is split
/// into generalized eigencomponents of `ad_B` on the Krylov space of each
/// homogeneous part of `q̃`. Family members may not exceed `max_degree`.
pub fn chen_reduce(m: &LieAlgebra, q: &VectorField, max_degree: u32, cap: usize) -> Result<ChenReduction> {
    let n = m.n();
    CentraError::check_dim(n, q.dim())?;
    if !q.homogeneous_part(0).is_zero() {
        return Err(CentraError::Invalid("field does not vanish at the origin".into()));
    }
    if !is_equivariant(m, q)? {
        return Err(CentraError::NotEquivariant { index: 0 });
    }
    let linear = q.linear_part();
    let transport = SpectralSplit::new(&linear)?
        .exp_matrix_terms()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|entry| {
                    let mut e = ExpPoly::zero();
                    for (rate, power, c) in entry {
                        e.add_term(rate, power, c);
                    }
                    e
                })
                .collect()
        })
        .collect();

    let mut seeds: Vec<VectorField> = Vec::new();
    let mut terms: Vec<EdeTerm> = Vec::new();
    for (k, part) in homogeneous_components(q) {
        if k < 2 || part.is_zero() {
            continue;
        }
        if k > max_degree {
            return Err(CentraError::DegreeBoundExceeded { bound: max_degree });
        }
        let pieces = exp_ad_terms(&linear, &part, k)?;
        let space = FieldSpace::new(n, k);
        let len = space.len();
        let mut echelon = SparseEchelon::new(len);
        let first = seeds.len();
        for (_, _, g) in &pieces {
            if echelon.insert(space.coords(g)) {
                seeds.push(g.clone());
            }
        }
        let columns: Vec<Vec<Rational>> = seeds[first..].iter().map(|s| to_dense(&space.coords(s), len)).collect();
        let basis = QMatrix::from_columns(len, &columns);
        let mut merged: BTreeMap<(usize, Rational), Vec<Rational>> = BTreeMap::new();
        for (rate, power, g) in pieces {
            let coords = solve(&basis, &to_dense(&space.coords(&g), len))
                .ok_or_else(|| CentraError::Internal("eigencomponent outside its own span".into()))?;
            for (offset, c) in coords.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let sigma = merged.entry((first + offset, rate.clone())).or_default();
                if sigma.len() <= power as usize {
                    sigma.resize(power as usize + 1, Rational::zero());
                }
                sigma[power as usize] += c;
            }
        }
        terms.extend(merged.into_iter().map(|((seed, rate), sigma)| EdeTerm { seed, sigma, rate }));
    }

    let family = close_bounded(m, &seeds, cap, Some(max_degree))?;
    Ok(ChenReduction { linear, family, system: EDESystem { terms }, transport })
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
    fn resonant_quadratic_example() {
        let m = stock::diagonal(&[&[1, 2]]);
        let q = vf(&["x1", "2*x2 + x1^2"]);
        let red = chen_reduce(&m, &q, 6, 50).unwrap();
        assert_eq!(red.family.fields(), &[vf(&["0", "x1^2"])]);
        assert!(red.system.is_autonomous());
        let (y1, y2) = (rat(3), rat(-2));
        let x = red.solve(&[y1.clone(), y2.clone()], &Rational::zero()).unwrap();
        assert_eq!(x.components[0], ExpPoly::term(rat(1), 0, y1.clone()));
        let mut expected = ExpPoly::term(rat(2), 0, y2);
        expected.add_term(rat(2), 1, &y1 * &y1);
        assert_eq!(x.components[1], expected);
        let rhs = crate::superposition::field_along(&q, &x).unwrap();
        assert!(x.derivative().sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn linear_fields_reduce_to_transport() {
        let q = vf(&["x1", "2*x2"]);
        let red = chen_reduce(&stock::diagonal(&[&[1, 2]]), &q, 6, 50).unwrap();
        assert!(red.family.is_empty() && red.system.terms.is_empty());
        let x = red.solve(&[rat(1), rat(1)], &Rational::zero()).unwrap();
        assert_eq!(x.components[1], ExpPoly::term(rat(2), 0, rat(1)));

        let nil = vf(&["x2", "0"]);
        let red = chen_reduce(&LieAlgebra::closure_in(2, &[], 4).unwrap(), &nil, 6, 50).unwrap();
        assert_eq!(red.transport[0][1], ExpPoly::polynomial(&[rat(0), rat(1)]));
        assert_eq!(red.transport[0][0], ExpPoly::constant(rat(1)));
        assert!(red.transport[1][0].is_zero());
    }

    #[test]
    fn nonresonant_terms_pick_up_rates() {
        let m = stock::diagonal(&[&[1, 2]]);
        let q = vf(&["x1", "x2 + x1^2"]);
        let red = chen_reduce(&m, &q, 6, 50).unwrap();
        assert_eq!(red.system.terms.len(), 1);
        assert_eq!(red.system.terms[0].rate, rat(1));
        let (y1, y2) = (rat(2), rat(-1));
        let x = red.solve(&[y1.clone(), y2.clone()], &Rational::zero()).unwrap();
        let mut expected = ExpPoly::term(rat(1), 0, &y2 - &y1 * &y1);
        expected.add_term(rat(2), 0, &y1 * &y1);
        assert_eq!(x.components[1], expected);
        let rhs = crate::superposition::field_along(&q, &x).unwrap();
        assert!(x.derivative().sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn infinite_families_hit_the_cap() {
        let m = LieAlgebra::closure_in(2, &[], 4).unwrap();
        let q = vf(&["x1 + x1^2", "3*x2"]);
        assert!(matches!(chen_reduce(&m, &q, 60, 8), Err(CentraError::FamilyCapExceeded { cap: 8 })));
        assert!(matches!(chen_reduce(&m, &q, 4, 50), Err(CentraError::DegreeBoundExceeded { bound: 4 })));
    }

    #[test]
    fn irrational_linear_part_is_rejected() {
        let q = vf(&["-x2", "x1"]);
        assert!(matches!(chen_reduce(&stock::so2(), &q, 6, 50), Err(CentraError::IrrationalSpectrum { .. })));
    }

    #[test]
    fn rejects_nonvanishing_and_nonequivariant_fields() {
        let m = stock::diagonal(&[&[1, 2]]);
        assert!(matches!(chen_reduce(&m, &vf(&["1", "x2"]), 6, 50), Err(CentraError::Invalid(_))));
        assert!(matches!(chen_reduce(&m, &vf(&["x2", "x2"]), 6, 50), Err(CentraError::NotEquivariant { .. })));
    }

    fn check_conjugation(red: &ChenReduction, tilde: &VectorField) {
        let n = tilde.dim();
        let points = [(0.0, [0.3, -0.7, 1.1]), (0.5, [1.0, 0.2, -0.4]), (1.0, [-0.6, 0.9, 0.5])];
        for (t, z) in points {
            let z = &z[..n];
            let tm = red.transport_f64(t);
            let tinv = red.transport_f64(-t);
            let x: Vec<f64> = (0..n).map(|i| (0..n).map(|j| tm[i][j] * z[j]).sum()).collect();
            let g = tilde.eval_f64(&x);
            let lhs: Vec<f64> = (0..n).map(|i| (0..n).map(|j| tinv[i][j] * g[j]).sum()).collect();
            for (a, b) in lhs.iter().zip(red.reduced_rhs_f64(t, z)) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn reduced_field_matches_conjugation_numerically() {
        let m = stock::diagonal(&[&[1, 2, 3]]);
        let red = chen_reduce(&m, &vf(&["x1", "2*x2 + x1^2", "3*x3 + x1*x2 + x1^3"]), 6, 50).unwrap();
        check_conjugation(&red, &vf(&["0", "x1^2", "x1*x2 + x1^3"]));
        let red = chen_reduce(&stock::diagonal(&[&[1, 2]]), &vf(&["x1", "x2 + x1^2"]), 6, 50).unwrap();
        check_conjugation(&red, &vf(&["0", "x1^2"]));
        let m = stock::diagonal(&[&[1, 1, 2]]);
        let q = vf(&["x2", "0", "x1*x2 + x2^2"]);
        let red = chen_reduce(&m, &q, 6, 50).unwrap();
        check_conjugation(&red, &vf(&["0", "0", "x1*x2 + x2^2"]));
    }
}
