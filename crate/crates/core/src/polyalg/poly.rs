use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use crate::error::{CentraError, Result};
use crate::exactla::{format_rational, rat, to_f64, Rational};

/// A polynomial in `n` variables: a finite map from monomials to nonzero rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly { nvars: n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(n, Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// The coordinate function `x_{i+1}` (zero-based index).
    pub fn var(n: usize, i: usize) -> Self {
        Self::term(n, Monomial::var(n, i), Rational::one())
    }

    pub fn term(n: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), n, "monomial arity mismatch");
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(exponents: Vec<u32>) -> Self {
        let n = exponents.len();
        Self::term(n, Monomial::new(exponents), Rational::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// True when every term has total degree `m` (the zero polynomial qualifies).
    pub fn is_homogeneous(&self, m: u32) -> bool {
        self.terms.keys().all(|k| k.degree() == m)
    }

    pub fn homogeneous_part(&self, m: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(k, _)| k.degree() == m).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        assert_eq!(m.nvars(), self.nvars, "monomial arity mismatch");
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        CentraError::check_dim(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        CentraError::check_dim(self.nvars, other.nvars)?;
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    /// `∂/∂x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly {
        assert!(i < self.nvars, "variable index out of range");
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some(lower) = m.lower(i) {
                out.add_term(lower, c * rat(m.exponents()[i] as i64));
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        CentraError::check_dim(self.nvars, x.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, xi) in m.exponents().iter().zip(x) {
                for _ in 0..*e {
                    t *= xi;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| to_f64(c) * m.eval_f64(x)).sum()
    }

    /// Parses the text form produced by `Display`, e.g. `"3/2*x1^2*x3 - x2 + 1"`.
    pub fn parse(n: usize, s: &str) -> Result<Poly> {
        super::parse::parse_poly(n, s)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_unit = m.degree() == 0;
            if is_unit {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ratio;

    #[test]
    fn arithmetic_and_degree() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).unwrap().pow(2);
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");
        assert_eq!(p.degree(), Some(2));
        assert_eq!(Poly::zero(2).degree(), None);
        assert!(p.sub(&p).unwrap().is_zero());
        assert!(x.add(&Poly::var(3, 0)).is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let p = Poly::parse(3, "3/2*x1^2*x3 - x2").unwrap();
        assert_eq!(p.derivative(0).to_string(), "3*x1*x3");
        assert_eq!(p.eval(&[rat(2), rat(1), ratio(1, 3)]).unwrap(), rat(1));
    }

    #[test]
    fn display_negative_and_constant() {
        let p = Poly::parse(2, "-1 + x1 - 2/3*x2^2").unwrap();
        assert_eq!(p.to_string(), "-1 + x1 - 2/3*x2^2");
    }
}
