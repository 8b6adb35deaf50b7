//! JSON problem files.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "generators": [[["1", "0"], ["0", "2"]]],
//!   "field": ["x1", "2*x2 + x1^2"],
//!   "system": {"seeds": [["0", "x1^2"]], "terms": [{"seed": 0, "sigma": ["1"], "rate": "0"}]},
//!   "symmetry": [["1", "0"], ["0", "2"]],
//!   "options": {"max_degree": 4, "cap": 100, "y0": ["1", "0"], "t0": "0", "alpha": ["0"]}
//! }
//! ```
//!
//! Only `dimension` and `generators` are required. Rationals are always strings.

use serde::{Deserialize, Serialize};

use crate::error::{CentraError, Result};
use crate::exactla::{parse_rational, QMatrix, Rational};
use crate::liealg::LieAlgebra;
use crate::polyalg::VectorField;
use crate::superposition::{EDESystem, EdeTerm};

/// Largest accepted ambient dimension.
pub const MAX_DIMENSION: usize = 32;

type RawMatrix = Vec<Vec<String>>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    pub seeds: Vec<Vec<String>>,
    #[serde(default)]
    pub terms: Vec<EdeTerm>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
}

/// The problem file exactly as written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub generators: Vec<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<RawSystem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<RawMatrix>,
    #[serde(default)]
    pub options: Options,
}

/// A validated problem: every rational parsed, every matrix `n × n`, every field of arity `n`.
#[derive(Clone, Debug)]
pub struct Problem {
    pub n: usize,
    pub generators: Vec<QMatrix>,
    pub field: Option<VectorField>,
    pub seeds: Vec<VectorField>,
    pub system: Option<EDESystem>,
    pub symmetry: Option<QMatrix>,
    pub max_degree: Option<u32>,
    pub cap: Option<usize>,
    pub y0: Option<Vec<Rational>>,
    pub t0: Option<Rational>,
    pub alpha: Option<Vec<Rational>>,
}

fn matrix(n: usize, raw: &RawMatrix, what: &str) -> Result<QMatrix> {
    if raw.len() != n || raw.iter().any(|r| r.len() != n) {
        return Err(CentraError::Invalid(format!("{what} is not a {n}x{n} matrix")));
    }
    let rows = raw
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    QMatrix::from_rows(rows)
}

fn parse_field(n: usize, raw: &[String], what: &str) -> Result<VectorField> {
    if raw.len() != n {
        return Err(CentraError::Invalid(format!("{what} has {} components, expected {n}", raw.len())));
    }
    VectorField::parse(raw)
}

fn rationals(raw: &[String]) -> Result<Vec<Rational>> {
    raw.iter().map(|s| parse_rational(s)).collect()
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CentraError::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<Problem> {
        let n = self.dimension;
        if n == 0 || n > MAX_DIMENSION {
            return Err(CentraError::Invalid(format!("dimension must be between 1 and {MAX_DIMENSION}")));
        }
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| matrix(n, g, &format!("generator {i}")))
            .collect::<Result<Vec<_>>>()?;
        let field = self.field.as_deref().map(|f| parse_field(n, f, "field")).transpose()?;
        let (seeds, system) = match &self.system {
            None => (Vec::new(), None),
            Some(raw) => {
                let seeds = raw
                    .seeds
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_field(n, s, &format!("seed {i}")))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(t) = raw.terms.iter().find(|t| t.seed >= seeds.len()) {
                    return Err(CentraError::Invalid(format!("term references missing seed {}", t.seed)));
                }
                (seeds, Some(EDESystem { terms: raw.terms.clone() }))
            }
        };
        let symmetry = self.symmetry.as_ref().map(|a| matrix(n, a, "symmetry")).transpose()?;
        let y0 = self.options.y0.as_deref().map(rationals).transpose()?;
        if let Some(y) = &y0 {
            CentraError::check_dim(n, y.len())?;
        }
        Ok(Problem {
            n,
            generators,
            field,
            seeds,
            system,
            symmetry,
            max_degree: self.options.max_degree,
            cap: self.options.cap,
            y0,
            t0: self.options.t0.as_deref().map(parse_rational).transpose()?,
            alpha: self.options.alpha.as_deref().map(rationals).transpose()?,
        })
    }
}

impl Problem {
    pub fn parse(text: &str) -> Result<Self> {
        ProblemFile::from_json(text)?.validate()
    }

    /// The Lie algebra generated by the listed matrices.
    pub fn algebra(&self, cap: usize) -> Result<LieAlgebra> {
        LieAlgebra::closure_in(self.n, &self.generators, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    const FULL: &str = r#"{
        "dimension": 2,
        "generators": [[["1", "0"], ["0", "2"]]],
        "field": ["x1", "2*x2 + x1^2"],
        "system": {"seeds": [["0", "x1^2"]], "terms": [{"seed": 0, "sigma": ["1"], "rate": "0"}]},
        "symmetry": [["1", "0"], ["0", "2"]],
        "options": {"max_degree": 4, "cap": 100, "y0": ["1", "0"], "t0": "0", "alpha": ["0"]}
    }"#;

    #[test]
    fn parses_a_full_problem() {
        let p = Problem::parse(FULL).unwrap();
        assert_eq!(p.n, 2);
        assert_eq!(p.generators, vec![QMatrix::diag_i64(&[1, 2])]);
        assert_eq!(p.seeds.len(), 1);
        assert_eq!(p.y0, Some(vec![rat(1), rat(0)]));
        assert_eq!(p.algebra(10).unwrap().dim(), 1);
        let file = ProblemFile::from_json(FULL).unwrap();
        let again = ProblemFile::from_json(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn minimal_problem() {
        let p = Problem::parse(r#"{"dimension": 3, "generators": []}"#).unwrap();
        assert!(p.field.is_none() && p.system.is_none());
        assert_eq!(p.algebra(4).unwrap().dim(), 0);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            r#"{"dimension": 2, "generators": [[["1", "0"], ["0"]]]}"#,
            r#"{"dimension": 2, "generators": [[["1.5", "0"], ["0", "1"]]]}"#,
            r#"{"dimension": 2, "generators": [[[1, 0], [0, 1]]]}"#,
            r#"{"dimension": 0, "generators": []}"#,
            r#"{"dimension": 2, "generators": [], "field": ["x1"]}"#,
            r#"{"dimension": 2, "generators": [], "field": ["x3", "0"]}"#,
            r#"{"dimension": 2, "generators": [], "extra": 1}"#,
            r#"{"dimension": 2, "generators": [], "system": {"seeds": [], "terms": [{"seed": 0, "sigma": [], "rate": "0"}]}}"#,
            r#"{"dimension": 2, "generators": [], "options": {"y0": ["1"]}}"#,
            r#"{"dimension": 2, "generators": [], "options": {"t0": "1/0"}}"#,
            "not json",
        ] {
            assert!(Problem::parse(bad).is_err(), "{bad}");
        }
    }
}
