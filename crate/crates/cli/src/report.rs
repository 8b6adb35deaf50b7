//! Serializable reports, one per subcommand. Every report deserializes back
//! into the same value, and field order is fixed by the struct definitions.

use serde::{Deserialize, Serialize};

use centra::equivariance::{FieldPair, FinitenessVerdict, NilpotencyReport};
use centra::exactla::format_rational;
use centra::invariants::ResonanceLattice;
use centra::normalform::NormalFormReport;
use centra::superposition::{EDESystem, ExpPoly, ExpRecord};
use centra::{LieAlgebra, QMatrix, Rational};

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub dimension: usize,
    pub basis: Vec<Vec<Vec<String>>>,
    pub abelian: bool,
    pub solvable: bool,
    pub perfect: bool,
    pub derived_series: Vec<usize>,
}

impl AlgebraSummary {
    pub fn of(m: &LieAlgebra) -> Self {
        let (solvable, derived_series) = m.is_solvable();
        Self {
            dimension: m.dim(),
            basis: m.basis().iter().map(QMatrix::to_strings).collect(),
            abelian: m.is_abelian(),
            solvable,
            perfect: m.is_perfect(),
            derived_series,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldBlock {
    pub degree: u32,
    pub dimension: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureSummary {
    pub pairs_checked: usize,
    pub violations: Vec<FieldPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerReport {
    pub command: String,
    pub dimension: usize,
    pub max_degree: u32,
    pub algebra: AlgebraSummary,
    pub degrees: Vec<FieldBlock>,
    pub closure: ClosureSummary,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyBlock {
    pub degree: u32,
    pub dimension: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub command: String,
    pub dimension: usize,
    pub max_degree: u32,
    pub algebra: AlgebraSummary,
    pub alpha: Vec<String>,
    pub degrees: Vec<PolyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance: Option<ResonanceLattice>,
    pub notes: Vec<String>,
}

/// Certificate payloads that can be checked independently of the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A nonconstant invariant `φ`; `φ^m·E` was checked equivariant for the listed `m`.
    Invariant { witness: String, powers_checked: Vec<u32>, passed: bool },
    /// `Σ c_j B_j = diag(spectrum)` with entries of one sign, bounding degrees by `max_degree`.
    SameSignCombination {
        combination: Vec<String>,
        spectrum: Vec<String>,
        max_degree: u32,
        /// Present when the certified bound is within the requested degree range.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nilpotency: Option<NilpotencyReport>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub command: String,
    pub dimension: usize,
    pub max_degree: u32,
    pub algebra: AlgebraSummary,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub searched_bound: Option<u32>,
}

impl FinitenessReport {
    pub fn verdict_tag(v: &FinitenessVerdict) -> String {
        v.tag().to_string()
    }

    pub fn combination_strings(c: &[Rational]) -> Vec<String> {
        strings(c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCheck {
    pub t_end: f64,
    pub steps: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub command: String,
    pub dimension: usize,
    /// `"family"` for an explicit elementary system, `"chen"` for an autonomous field.
    pub method: String,
    pub y0: Vec<String>,
    pub t0: String,
    pub family: Vec<Vec<String>>,
    pub system: EDESystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_part: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport: Option<Vec<Vec<ExpPoly>>>,
    pub solution: Vec<ExpRecord>,
    pub solution_text: Vec<String>,
    pub residual_is_zero: bool,
    pub polynomial_in_t: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<NumericCheck>,
}

impl SolveReport {
    pub fn rationals(v: &[Rational]) -> Vec<String> {
        strings(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormCommandReport {
    pub command: String,
    pub max_degree: u32,
    pub symmetry_used: bool,
    pub report: NormalFormReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub dimension: usize,
    pub max_degree: u32,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}
