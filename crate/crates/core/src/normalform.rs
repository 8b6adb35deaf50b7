//! Formal Poincaré–Dulac normal forms for fields with diagonal rational linear
//! part, optionally respecting a commuting diagonal symmetry `A`.
//!
//! Conventions: for a generator `u` of degree `k >= 2` the transformed field is
//! the Lie series `exp(ad_u) f = f + [u, f] + [u, [u, f]]/2 + …`, i.e. the
//! conjugate of `f` by the time-one flow of `u`, which agrees with the
//! substitution `x = y + u(y)` up to degree `2k - 2`. In degree `k` the
//! homological step reads `new f_k = f_k + [u_k, Bx]`, and for a monomial field
//! `[x^r e_ℓ, Bx] = (σ_ℓ - r·σ) x^r e_ℓ`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{CentraError, Result};
use crate::exactla::{rat, QMatrix, Rational};
use crate::polyalg::{homogeneous_components, lie_bracket, monomials_of_degree, Monomial, VectorField};

/// `f = Bx + Σ_{k=2}^{D} f_k` with `f_k` homogeneous of degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalField {
    linear: QMatrix,
    nonlinear: BTreeMap<u32, VectorField>,
    truncation: u32,
}

impl FormalField {
    pub fn new(linear: QMatrix, nonlinear: BTreeMap<u32, VectorField>, truncation: u32) -> Result<Self> {
        if !linear.is_square() {
            return Err(CentraError::Invalid("linear part must be square".into()));
        }
        let n = linear.rows();
        let mut kept = BTreeMap::new();
        for (k, f) in nonlinear {
            CentraError::check_dim(n, f.dim())?;
            if k < 2 || !f.is_homogeneous(k) {
                return Err(CentraError::Invalid(format!("degree-{k} entry is not homogeneous of degree {k} >= 2")));
            }
            if k <= truncation && !f.is_zero() {
                kept.insert(k, f);
            }
        }
        Ok(Self { linear, nonlinear: kept, truncation })
    }

    /// Splits a field vanishing at the origin into its graded parts, dropping degrees above `truncation`.
    pub fn from_field(f: &VectorField, truncation: u32) -> Result<Self> {
        let mut parts = homogeneous_components(f);
        if parts.remove(&0).is_some_and(|c| !c.is_zero()) {
            return Err(CentraError::Invalid("field does not vanish at the origin".into()));
        }
        parts.remove(&1);
        Self::new(f.linear_part(), parts, truncation)
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn linear(&self) -> &QMatrix {
        &self.linear
    }

    pub fn nonlinear(&self) -> &BTreeMap<u32, VectorField> {
        &self.nonlinear
    }

    /// Degree-`k` part (zero if absent).
    pub fn part(&self, k: u32) -> VectorField {
        self.nonlinear.get(&k).cloned().unwrap_or_else(|| VectorField::zero(self.dim()))
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_linear(&self) -> bool {
        self.nonlinear.is_empty()
    }

    pub fn to_field(&self) -> VectorField {
        self.nonlinear
            .values()
            .try_fold(VectorField::linear(&self.linear), |acc, f| acc.add(f))
            .expect("parts share the ambient dimension")
    }
}

fn diagonal_spectrum(m: &QMatrix, what: &str) -> Result<Vec<Rational>> {
    if !m.is_square() || !m.is_diagonal() {
        return Err(CentraError::Unsupported(format!("{what} must be a diagonal matrix")));
    }
    Ok(m.diagonal())
}

fn weight_gap(r: &Monomial, l: usize, spectrum: &[Rational]) -> Rational {
    let dot: Rational = r.exponents().iter().zip(spectrum).map(|(e, s)| s * rat(*e as i64)).sum();
    dot - &spectrum[l]
}

/// Monomial fields `x^r e_ℓ` of degree `k` with `r·σ = σ_ℓ` and, when a
/// symmetry is given, also `r·τ = τ_ℓ`.
pub fn resonant_space(b: &QMatrix, k: u32, symmetry: Option<&QMatrix>) -> Result<Vec<VectorField>> {
    let sigma = diagonal_spectrum(b, "linear part")?;
    let tau = symmetry.map(|a| diagonal_spectrum(a, "symmetry")).transpose()?;
    if let Some(t) = &tau {
        CentraError::check_dim(sigma.len(), t.len())?;
    }
    let n = sigma.len();
    let mut out = Vec::new();
    for r in monomials_of_degree(n, k) {
        for l in 0..n {
            if !weight_gap(&r, l, &sigma).is_zero() {
                continue;
            }
            if tau.as_ref().is_some_and(|t| !weight_gap(&r, l, t).is_zero()) {
                continue;
            }
            out.push(VectorField::monomial_field(r.clone(), l));
        }
    }
    Ok(out)
}

fn truncate(f: &VectorField, d: u32) -> VectorField {
    homogeneous_components(f)
        .into_iter()
        .filter(|(k, _)| *k <= d)
        .try_fold(VectorField::zero(f.dim()), |acc, (_, p)| acc.add(&p))
        .expect("parts share the ambient dimension")
}

/// `exp(ad_u) f` truncated at degree `d`.
pub fn push_forward(f: &FormalField, u: &VectorField, d: u32) -> Result<FormalField> {
    CentraError::check_dim(f.dim(), u.dim())?;
    if u.is_zero() {
        return FormalField::from_field(&truncate(&f.to_field(), d), d);
    }
    match u.homogeneous_degree() {
        Some(k) if k >= 2 => {}
        _ => return Err(CentraError::Invalid("generator must be homogeneous of degree at least 2".into())),
    }
    let mut acc = truncate(&f.to_field(), d);
    let mut term = acc.clone();
    let mut m = 1i64;
    loop {
        term = truncate(&lie_bracket(u, &term)?, d).scale(&Rational::new(1.into(), m.into()));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term)?;
        m += 1;
    }
    FormalField::from_field(&acc, d)
}

/// One normalization step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStep {
    pub degree: u32,
    pub resonant_basis: Vec<VectorField>,
    /// Nonresonant part of the degree-`k` term before the step.
    pub removed: VectorField,
    pub generator: VectorField,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub normal_form: FormalField,
    pub generators: BTreeMap<u32, VectorField>,
    pub steps: Vec<DegreeStep>,
}

fn commutes_with(a: &QMatrix, f: &VectorField) -> Result<bool> {
    Ok(lie_bracket(&VectorField::linear(a), f)?.is_zero())
}

/// Removes every nonresonant term up to degree `d`, degree by degree.
///
/// The generator in degree `k` is the unique one without components along
/// resonant monomial fields; when a symmetry is supplied the input and every
/// generator are checked to commute with it.
pub fn normal_form(f: &FormalField, d: u32, symmetry: Option<&QMatrix>) -> Result<NormalForm> {
    let sigma = diagonal_spectrum(f.linear(), "linear part")?;
    if let Some(a) = symmetry {
        diagonal_spectrum(a, "symmetry")?;
        CentraError::check_dim(f.dim(), a.rows())?;
        if !commutes_with(a, &f.to_field())? {
            return Err(CentraError::NotEquivariant { index: 0 });
        }
    }
    let mut current = FormalField::new(f.linear.clone(), f.nonlinear.clone(), d)?;
    let mut generators = BTreeMap::new();
    let mut steps = Vec::new();
    for k in 2..=d {
        let part = current.part(k);
        let n = f.dim();
        let mut removed = VectorField::zero(n);
        let mut generator = VectorField::zero(n);
        for (l, comp) in part.components().iter().enumerate() {
            for (r, c) in comp.terms() {
                let gap = weight_gap(r, l, &sigma);
                if gap.is_zero() {
                    continue;
                }
                let unit = VectorField::monomial_field(r.clone(), l);
                removed = removed.add(&unit.scale(c))?;
                generator = generator.add(&unit.scale(&(c / &gap)))?;
            }
        }
        if let Some(a) = symmetry {
            if !commutes_with(a, &generator)? {
                return Err(CentraError::Internal(format!("degree-{k} generator breaks the symmetry")));
            }
        }
        if !generator.is_zero() {
            current = push_forward(&current, &generator, d)?;
        }
        let after = current.part(k);
        let resonant_basis = resonant_space(f.linear(), k, symmetry)?;
        for (l, comp) in after.components().iter().enumerate() {
            if comp.terms().any(|(r, _)| !weight_gap(r, l, &sigma).is_zero()) {
                return Err(CentraError::Internal(format!("degree-{k} term remained nonresonant")));
            }
        }
        generators.insert(k, generator.clone());
        steps.push(DegreeStep { degree: k, resonant_basis, removed, generator });
    }
    Ok(NormalForm { normal_form: current, generators, steps })
}

/// Serializable summary of a normal-form computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormReport {
    pub convention: String,
    pub dimension: usize,
    pub truncation: u32,
    pub linear: Vec<Vec<String>>,
    pub symmetry: Option<Vec<Vec<String>>>,
    pub degrees: Vec<DegreeReport>,
    pub normal_form: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: u32,
    pub resonant_basis: Vec<Vec<String>>,
    pub removed: Vec<String>,
    pub generator: Vec<String>,
    pub normal_form_term: Vec<String>,
}

pub const CONVENTION: &str =
    "[f,g] = Dg*f - Df*g; new f_k = f_k + [u_k, Bx]; transformation = time-one flow of u_k (Lie series)";

impl NormalForm {
    pub fn report(&self, symmetry: Option<&QMatrix>) -> NormalFormReport {
        let nf = &self.normal_form;
        NormalFormReport {
            convention: CONVENTION.to_string(),
            dimension: nf.dim(),
            truncation: nf.truncation(),
            linear: nf.linear().to_strings(),
            symmetry: symmetry.map(QMatrix::to_strings),
            degrees: self
                .steps
                .iter()
                .map(|s| DegreeReport {
                    degree: s.degree,
                    resonant_basis: s.resonant_basis.iter().map(VectorField::to_strings).collect(),
                    removed: s.removed.to_strings(),
                    generator: s.generator.to_strings(),
                    normal_form_term: nf.part(s.degree).to_strings(),
                })
                .collect(),
            normal_form: nf.to_field().to_strings(),
        }
    }
}
