use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::monomial::Monomial;
use super::poly::Poly;
use crate::error::{CentraError, Result};
use crate::exactla::{QMatrix, Rational};

/// A polynomial vector field `f = (φ_1, ..., φ_n)` on an n-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    components: Vec<Poly>,
}

impl VectorField {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let n = components.len();
        for c in &components {
            CentraError::check_dim(n, c.nvars())?;
        }
        Ok(Self { components })
    }

    pub fn zero(n: usize) -> Self {
        Self { components: vec![Poly::zero(n); n] }
    }

    /// The Euler field `E(x) = x`.
    pub fn identity(n: usize) -> Self {
        Self { components: (0..n).map(|i| Poly::var(n, i)).collect() }
    }

    /// The linear field `x ↦ Bx`.
    pub fn linear(b: &QMatrix) -> Self {
        assert!(b.is_square(), "linear field from a non-square matrix");
        let n = b.rows();
        let components = (0..n)
            .map(|i| Poly::from_terms(n, (0..n).map(|j| (Monomial::var(n, j), b[(i, j)].clone()))))
            .collect();
        Self { components }
    }

    /// `x^r · e_ℓ` (zero-based ℓ).
    pub fn monomial_field(m: Monomial, l: usize) -> Self {
        let n = m.nvars();
        let mut f = Self::zero(n);
        f.components[l] = Poly::term(n, m, Rational::from_integer(1.into()));
        f
    }

    /// Parses one polynomial string per component.
    pub fn parse<S: AsRef<str>>(components: &[S]) -> Result<Self> {
        let n = components.len();
        Ok(Self {
            components: components.iter().map(|s| Poly::parse(n, s.as_ref())).collect::<Result<_>>()?,
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Poly::degree).max()
    }

    pub fn is_homogeneous(&self, m: u32) -> bool {
        self.components.iter().all(|c| c.is_homogeneous(m))
    }

    /// Degree of a nonzero homogeneous field.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.is_homogeneous(d).then_some(d)
    }

    pub fn homogeneous_part(&self, m: u32) -> VectorField {
        Self { components: self.components.iter().map(|c| c.homogeneous_part(m)).collect() }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        CentraError::check_dim(self.dim(), other.dim())?;
        Ok(Self {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect::<Result<_>>()?,
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, s: &Rational) -> VectorField {
        Self { components: self.components.iter().map(|c| c.scale(s)).collect() }
    }

    /// Multiplies every component by the scalar polynomial `phi`.
    pub fn mul_poly(&self, phi: &Poly) -> Result<VectorField> {
        Ok(Self { components: self.components.iter().map(|c| c.mul(phi)).collect::<Result<_>>()? })
    }

    /// `x ↦ B·f(x)`.
    pub fn apply_matrix(&self, b: &QMatrix) -> Result<VectorField> {
        CentraError::check_dim(self.dim(), b.cols())?;
        CentraError::check_dim(self.dim(), b.rows())?;
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Poly::zero(n);
            for j in 0..n {
                if !b[(i, j)].is_zero() {
                    acc = acc.add(&self.components[j].scale(&b[(i, j)]))?;
                }
            }
            out.push(acc);
        }
        Ok(Self { components: out })
    }

    /// Linear part as a matrix: entry `(i, j)` is the coefficient of `x_j` in `f_i`.
    pub fn linear_part(&self) -> QMatrix {
        let n = self.dim();
        let mut b = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] = self.components[i].coeff(&Monomial::var(n, j));
            }
        }
        b
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval_f64(x)).collect()
    }

    /// Coefficient of the monomial field `x^r e_ℓ`.
    pub fn coeff(&self, m: &Monomial, l: usize) -> Rational {
        self.components[l].coeff(m)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(Poly::to_string).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `X_B(φ) = Σ_i (Bx)_i ∂φ/∂x_i`.
pub fn lie_derivative(b: &QMatrix, phi: &Poly) -> Result<Poly> {
    CentraError::check_dim(phi.nvars(), b.rows())?;
    CentraError::check_dim(b.rows(), b.cols())?;
    let bx = VectorField::linear(b);
    derivation(&bx, phi)
}

/// `X_f(φ) = Σ_i f_i ∂φ/∂x_i`.
pub(crate) fn derivation(f: &VectorField, phi: &Poly) -> Result<Poly> {
    CentraError::check_dim(f.dim(), phi.nvars())?;
    let mut acc = Poly::zero(phi.nvars());
    for (i, fi) in f.components().iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        let d = phi.derivative(i);
        if !d.is_zero() {
            acc = acc.add(&fi.mul(&d)?)?;
        }
    }
    Ok(acc)
}

/// `Df`, entry `(i, j) = ∂f_i/∂x_j`.
pub fn jacobian(f: &VectorField) -> Vec<Vec<Poly>> {
    let n = f.dim();
    f.components().iter().map(|c| (0..n).map(|j| c.derivative(j)).collect()).collect()
}

/// `x ↦ Dp(x)·q(x)`.
pub fn directional(p: &VectorField, q: &VectorField) -> Result<VectorField> {
    CentraError::check_dim(p.dim(), q.dim())?;
    Ok(VectorField { components: p.components().iter().map(|pi| derivation(q, pi)).collect::<Result<_>>()? })
}

/// `[f, g] = Dg·f - Df·g`.
pub fn lie_bracket(f: &VectorField, g: &VectorField) -> Result<VectorField> {
    directional(g, f)?.sub(&directional(f, g)?)
}

/// Splits `f` into homogeneous parts keyed by degree; zero parts are omitted.
pub fn homogeneous_components(f: &VectorField) -> BTreeMap<u32, VectorField> {
    let mut degrees: Vec<u32> = f
        .components()
        .iter()
        .flat_map(|c| c.terms().map(|(m, _)| m.degree()).collect::<Vec<_>>())
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees.into_iter().map(|d| (d, f.homogeneous_part(d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;
    use proptest::prelude::*;

    fn vf(s: &[&str]) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    #[test]
    fn lie_derivative_examples() {
        let b = QMatrix::diag_i64(&[2, -3]);
        let phi = Poly::monomial(vec![2, 1]);
        assert_eq!(lie_derivative(&b, &phi).unwrap(), phi.scale(&rat(1)));
        assert!(lie_derivative(&b, &Poly::constant(2, rat(5))).unwrap().is_zero());
        let rot = QMatrix::from_i64(&[[0, -1], [1, 0]]);
        let r2 = Poly::parse(2, "x1^2 + x2^2").unwrap();
        assert!(lie_derivative(&rot, &r2).unwrap().is_zero());
        assert!(lie_derivative(&QMatrix::identity(3), &r2).is_err());
    }

    #[test]
    fn bracket_examples() {
        let f = vf(&["x1^2*x2", "x2 - x1"]);
        assert!(lie_bracket(&f, &f).unwrap().is_zero());
        // Euler: [E, f] = (m - 1) f
        let g = vf(&["x1^3", "2*x1*x2^2"]);
        let e = VectorField::identity(2);
        assert_eq!(lie_bracket(&e, &g).unwrap(), g.scale(&rat(2)));
        // [Bx, Cx] = (CB - BC)x
        let b = QMatrix::from_i64(&[[1, 2], [0, 3]]);
        let c = QMatrix::from_i64(&[[0, 1], [1, 0]]);
        let expect = VectorField::linear(&(&(&c * &b) - &(&b * &c)));
        assert_eq!(lie_bracket(&VectorField::linear(&b), &VectorField::linear(&c)).unwrap(), expect);
    }

    #[test]
    fn directional_examples() {
        let q = vf(&["x1*x2", "x2^2 + 1"]);
        assert_eq!(directional(&VectorField::identity(2), &q).unwrap(), q);
        let b = QMatrix::from_i64(&[[1, 2], [3, 4]]);
        assert_eq!(directional(&VectorField::linear(&b), &q).unwrap(), q.apply_matrix(&b).unwrap());
        assert_eq!(directional(&vf(&["0", "x1^2"]), &vf(&["x1", "0"])).unwrap(), vf(&["0", "2*x1^2"]));
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(&VectorField::identity(2));
        assert_eq!(j[0][0], Poly::one(2));
        assert!(j[0][1].is_zero());
        assert!(jacobian(&vf(&["3", "1/2"])).iter().flatten().all(Poly::is_zero));
        let j = jacobian(&vf(&["x1*x2", "0"]));
        assert_eq!((j[0][0].to_string(), j[0][1].to_string()), ("x2".into(), "x1".into()));
    }

    #[test]
    fn homogeneous_splitting() {
        assert_eq!(homogeneous_components(&vf(&["x1", "x1 + x2"])).keys().copied().collect::<Vec<_>>(), vec![1]);
        assert!(homogeneous_components(&VectorField::zero(3)).is_empty());
        let parts = homogeneous_components(&vf(&["x1", "2*x2 + x1^2"]));
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(parts[&2], vf(&["0", "x1^2"]));
    }

    fn arb_field(max_deg: u32) -> impl Strategy<Value = VectorField> {
        prop::collection::vec(
            prop::collection::vec((prop::collection::vec(0u32..=max_deg, 2), -3i64..4), 0..4),
            2,
        )
        .prop_map(|comps| {
            VectorField::new(
                comps
                    .into_iter()
                    .map(|ts| Poly::from_terms(2, ts.into_iter().map(|(e, c)| (Monomial::new(e), rat(c)))))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn bracket_is_difference_of_directionals(f in arb_field(3), g in arb_field(3)) {
            let lhs = lie_bracket(&f, &g).unwrap();
            let rhs = directional(&g, &f).unwrap().sub(&directional(&f, &g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_identity(f in arb_field(3), m in 0u32..4) {
            let h = f.homogeneous_part(m);
            let lhs = directional(&h, &VectorField::identity(2)).unwrap();
            prop_assert_eq!(lhs, h.scale(&rat(m as i64)));
        }

        #[test]
        fn lie_derivative_is_a_derivation(
            f in arb_field(2),
            entries in prop::collection::vec(-3i64..4, 4),
        ) {
            let b = QMatrix::from_i64(&[[entries[0], entries[1]], [entries[2], entries[3]]]);
            let (phi, psi) = (f.component(0), f.component(1));
            let lhs = lie_derivative(&b, &phi.mul(psi).unwrap()).unwrap();
            let rhs = lie_derivative(&b, phi).unwrap().mul(psi).unwrap()
                .add(&phi.mul(&lie_derivative(&b, psi).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
