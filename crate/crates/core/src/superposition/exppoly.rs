use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CentraError, Result};
use crate::exactla::{format_rational, parse_rational, rat, to_f64, Rational};
use crate::polyalg::Poly;

/// A finite sum `Σ c · t^k · e^{λt}` with rational `λ` and `c`, in merged
/// canonical form: one entry per `(λ, k)`, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExpPoly {
    terms: BTreeMap<(Rational, u32), Rational>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Rational::zero(), 0, c)
    }

    pub fn term(rate: Rational, power: u32, coeff: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(rate, power, coeff);
        out
    }

    /// `Σ_k c_k t^k`.
    pub fn polynomial(coeffs: &[Rational]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out.add_term(Rational::zero(), k as u32, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, rate: Rational, power: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (rate, power);
        let merged = match self.terms.remove(&key) {
            Some(old) => old + coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    /// Terms ordered by rate, then power.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, u32, &Rational)> {
        self.terms.iter().map(|((l, k), c)| (l, *k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every rate is zero, i.e. the function is a polynomial in `t`.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|(l, _)| l.is_zero())
    }

    pub fn rates(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.terms.keys().map(|(l, _)| l.clone()).collect();
        out.dedup();
        out
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for ((l, k), c) in &other.terms {
            out.add_term(l.clone(), *k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExpPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> ExpPoly {
        if s.is_zero() {
            return Self::zero();
        }
        ExpPoly { terms: self.terms.iter().map(|(key, c)| (key.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = Self::zero();
        for ((l1, k1), c1) in &self.terms {
            for ((l2, k2), c2) in &other.terms {
                out.add_term(l1 + l2, k1 + k2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> ExpPoly {
        let mut out = Self::constant(Rational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> ExpPoly {
        let mut out = Self::zero();
        for ((l, k), c) in &self.terms {
            out.add_term(l.clone(), *k, c * l);
            if *k > 0 {
                out.add_term(l.clone(), k - 1, c * rat(*k as i64));
            }
        }
        out
    }

    /// Antiderivative with zero constant of integration.
    pub fn antiderivative(&self) -> ExpPoly {
        let mut out = Self::zero();
        for ((l, k), c) in &self.terms {
            if l.is_zero() {
                out.add_term(Rational::zero(), k + 1, c / rat(*k as i64 + 1));
                continue;
            }
            // ∫ t^k e^{λt} = e^{λt} Σ_j (-1)^j k!/(k-j)! t^{k-j} / λ^{j+1}
            let mut factor = c / l;
            for j in 0..=*k {
                out.add_term(l.clone(), k - j, factor.clone());
                factor = -factor * rat((k - j) as i64) / l;
            }
        }
        out
    }

    /// Exact value at `t` when every term with a nonzero rate can be evaluated
    /// rationally, which is the case exactly when `t = 0` or all rates vanish.
    pub fn eval_exact(&self, t: &Rational) -> Option<Rational> {
        let mut sum = Rational::zero();
        for ((l, k), c) in &self.terms {
            if !l.is_zero() && !t.is_zero() {
                return None;
            }
            sum += c * num_traits::pow(t.clone(), *k as usize);
        }
        Some(sum)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|((l, k), c)| to_f64(c) * t.powi(*k as i32) * (to_f64(l) * t).exp())
            .sum()
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((l, k), c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            match k {
                0 => {}
                1 => factors.push("t".to_string()),
                _ => factors.push(format!("t^{k}")),
            }
            if !l.is_zero() {
                let rate = if l.is_one() {
                    "t".to_string()
                } else if (-l).is_one() {
                    "-t".to_string()
                } else {
                    format!("{}*t", format_rational(l))
                };
                factors.push(format!("e^({rate})"));
            }
            let magnitude = if c < &Rational::zero() { -c.clone() } else { c.clone() };
            let sign = c < &Rational::zero();
            match (i, sign) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if !magnitude.is_one() || factors.is_empty() {
                parts.push(format_rational(&magnitude));
            }
            parts.extend(factors);
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Exact antiderivative `F` with `F(t0) = init`.
///
/// Fails with `Unsupported` when `t0 ≠ 0` and `f` has a term with nonzero
/// rate, because the constant of integration would involve `e^{λ t0}`.
pub fn integrate_exppoly(f: &ExpPoly, t0: &Rational, init: &Rational) -> Result<ExpPoly> {
    let anti = f.antiderivative();
    let at_t0 = anti.eval_exact(t0).ok_or_else(|| {
        CentraError::Unsupported(format!(
            "initial time {} with nonzero exponential rates has no exact closed form",
            format_rational(t0)
        ))
    })?;
    Ok(anti.add(&ExpPoly::constant(init - at_t0)))
}

/// A vector of exp-polynomials, one per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpPolyVec {
    pub components: Vec<ExpPoly>,
}

/// One serialized term `coeff · t^k · e^{λt}` with a vector coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpRecord {
    #[serde(with = "crate::exactla::serde_rational")]
    pub lambda: Rational,
    pub k: u32,
    #[serde(with = "crate::exactla::serde_rational_vec")]
    pub coeff: Vec<Rational>,
}

impl ExpPolyVec {
    pub fn zero(n: usize) -> Self {
        Self { components: vec![ExpPoly::zero(); n] }
    }

    pub fn constant(v: &[Rational]) -> Self {
        Self { components: v.iter().cloned().map(ExpPoly::constant).collect() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ExpPoly::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(ExpPoly::is_polynomial)
    }

    pub fn add(&self, other: &ExpPolyVec) -> Result<ExpPolyVec> {
        CentraError::check_dim(self.dim(), other.dim())?;
        Ok(Self { components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, other: &ExpPolyVec) -> Result<ExpPolyVec> {
        CentraError::check_dim(self.dim(), other.dim())?;
        Ok(Self { components: self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect() })
    }

    /// Multiplies every component by the scalar function `s`.
    pub fn mul_scalar(&self, s: &ExpPoly) -> ExpPolyVec {
        Self { components: self.components.iter().map(|c| c.mul(s)).collect() }
    }

    pub fn scale(&self, s: &Rational) -> ExpPolyVec {
        Self { components: self.components.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn derivative(&self) -> ExpPolyVec {
        Self { components: self.components.iter().map(ExpPoly::derivative).collect() }
    }

    pub fn integrate(&self, t0: &Rational, init: &[Rational]) -> Result<ExpPolyVec> {
        CentraError::check_dim(self.dim(), init.len())?;
        let components = self
            .components
            .iter()
            .zip(init)
            .map(|(c, v)| integrate_exppoly(c, t0, v))
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    pub fn eval_exact(&self, t: &Rational) -> Option<Vec<Rational>> {
        self.components.iter().map(|c| c.eval_exact(t)).collect()
    }

    pub fn eval_f64(&self, t: f64) -> Vec<f64> {
        self.components.iter().map(|c| c.eval_f64(t)).collect()
    }

    /// Merged records, one per `(λ, k)` occurring in any component, ordered by rate then power.
    pub fn to_records(&self) -> Vec<ExpRecord> {
        let mut keys: BTreeMap<(Rational, u32), Vec<Rational>> = BTreeMap::new();
        for (i, comp) in self.components.iter().enumerate() {
            for (l, k, c) in comp.terms() {
                keys.entry((l.clone(), k)).or_insert_with(|| vec![Rational::zero(); self.dim()])[i] = c.clone();
            }
        }
        keys.into_iter().map(|((lambda, k), coeff)| ExpRecord { lambda, k, coeff }).collect()
    }

    pub fn from_records(n: usize, records: &[ExpRecord]) -> Result<ExpPolyVec> {
        let mut out = Self::zero(n);
        for r in records {
            CentraError::check_dim(n, r.coeff.len())?;
            for (comp, c) in out.components.iter_mut().zip(&r.coeff) {
                comp.add_term(r.lambda.clone(), r.k, c.clone());
            }
        }
        Ok(out)
    }

    /// Parses a JSON list of records; the dimension is taken from the first record.
    pub fn parse_records(n: usize, json: &str) -> Result<ExpPolyVec> {
        let records: Vec<ExpRecord> = serde_json::from_str(json).map_err(|e| CentraError::Parse(e.to_string()))?;
        Self::from_records(n, &records)
    }
}

impl fmt::Display for ExpPolyVec {
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

/// Scalar record with a single coefficient, used for the scalar serialization.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarRecord {
    lambda: String,
    k: u32,
    coeff: String,
}

impl Serialize for ExpPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<ScalarRecord> = self
            .terms()
            .map(|(l, k, c)| ScalarRecord { lambda: format_rational(l), k, coeff: format_rational(c) })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<ScalarRecord>::deserialize(d)?;
        let mut out = ExpPoly::zero();
        for r in records {
            let l = parse_rational(&r.lambda).map_err(serde::de::Error::custom)?;
            let c = parse_rational(&r.coeff).map_err(serde::de::Error::custom)?;
            out.add_term(l, r.k, c);
        }
        Ok(out)
    }
}

/// `p(x(t))` for a polynomial `p` and a curve `x(t)`.
pub fn substitute(p: &Poly, x: &ExpPolyVec) -> Result<ExpPoly> {
    CentraError::check_dim(p.nvars(), x.dim())?;
    let mut powers: Vec<Vec<ExpPoly>> = vec![vec![ExpPoly::constant(Rational::one())]; x.dim()];
    let mut out = ExpPoly::zero();
    for (m, c) in p.terms() {
        let mut acc = ExpPoly::constant(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = powers[i].last().expect("nonempty").mul(&x.components[i]);
                powers[i].push(next);
            }
            acc = acc.mul(&powers[i][e as usize]);
        }
        out = out.add(&acc);
    }
    Ok(out)
}
