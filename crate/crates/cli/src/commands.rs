//! Subcommand implementations. Each returns a report and an exit status; errors
//! from the engine are mapped to exit codes by [`exit_code`].

use rayon::prelude::*;

use centra::equivariance::{
    centralizer_up_to, check_directional_closure, finiteness_report, infinite_certificate, nilpotency_witness,
    FinitenessVerdict,
};
use centra::exactla::{format_rational, rat, to_f64};
use centra::invariants::{invariant_space, relative_invariant_space, resonance_lattice, LinearForm};
use centra::normalform::{normal_form, push_forward, FormalField};
use centra::problem::Problem;
use centra::superposition::{
    chen_reduce, close_family, field_along, max_deviation, residual, solve_elementary, verify_numeric,
};
use centra::{CentraError, LieAlgebra, Rational, Result, VectorField};

use crate::report::*;

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Settings {
    pub max_degree: u32,
    pub cap: usize,
}

/// `(t_end, steps)` of the RK4 comparison.
pub type Window = (f64, usize);

pub fn exit_code(e: &CentraError) -> i32 {
    match e {
        CentraError::ClosureCapExceeded { .. }
        | CentraError::FamilyCapExceeded { .. }
        | CentraError::DegreeBoundExceeded { .. } => 3,
        CentraError::Unsupported(_) | CentraError::IrrationalSpectrum { .. } => 4,
        CentraError::Internal(_) => 1,
        _ => 2,
    }
}

pub fn error_kind(e: &CentraError) -> &'static str {
    match e {
        CentraError::DimensionMismatch { .. } => "dimension_mismatch",
        CentraError::Parse(_) => "parse",
        CentraError::Invalid(_) => "invalid",
        CentraError::ClosureCapExceeded { .. } => "closure_cap_exceeded",
        CentraError::FamilyCapExceeded { .. } => "family_cap_exceeded",
        CentraError::DegreeBoundExceeded { .. } => "degree_bound_exceeded",
        CentraError::NotEquivariant { .. } => "not_equivariant",
        CentraError::ConstantWitness => "constant_witness",
        CentraError::NotInvariant => "not_invariant",
        CentraError::NotFiniteCertified => "not_finite_certified",
        CentraError::Unsupported(_) => "unsupported",
        CentraError::IrrationalSpectrum { .. } => "irrational_spectrum",
        CentraError::Internal(_) => "internal",
    }
}

pub fn error_report(e: &CentraError) -> ErrorReport {
    ErrorReport { error: ErrorBody { kind: error_kind(e).into(), message: e.to_string(), exit_code: exit_code(e) } }
}

pub fn centralizer(p: &Problem, s: &Settings) -> Result<CentralizerReport> {
    let m = p.algebra(s.cap)?;
    let g = centralizer_up_to(&m, s.max_degree);
    let closure = check_directional_closure(&g)?;
    let degrees = g
        .per_degree
        .iter()
        .map(|(k, fields)| FieldBlock {
            degree: *k,
            dimension: fields.len(),
            basis: fields.iter().map(VectorField::to_strings).collect(),
        })
        .collect();
    let mut notes = vec!["degree 0 lists the constant equivariant fields".to_string()];
    if m.dim() == 0 {
        notes.push(format!(
            "the algebra is zero, so every field is equivariant: {} constant and {} linear fields",
            p.n,
            p.n * p.n
        ));
    }
    Ok(CentralizerReport {
        command: "centralizer".into(),
        dimension: p.n,
        max_degree: s.max_degree,
        algebra: AlgebraSummary::of(&m),
        degrees,
        closure: ClosureSummary { pairs_checked: closure.pairs_checked, violations: closure.violations },
        notes,
    })
}

pub fn invariants(p: &Problem, s: &Settings, alpha: Option<Vec<Rational>>) -> Result<InvariantsReport> {
    let m = p.algebra(s.cap)?;
    let alpha = LinearForm(alpha.or_else(|| p.alpha.clone()).unwrap_or_else(|| vec![rat(0); m.dim()]));
    CentraError::check_dim(m.dim(), alpha.0.len())?;
    let degrees = (1..=s.max_degree)
        .into_par_iter()
        .map(|k| {
            let basis = if alpha.is_zero() { invariant_space(&m, k) } else { relative_invariant_space(&m, &alpha, k)? };
            Ok(PolyBlock { degree: k, dimension: basis.len(), basis: basis.iter().map(ToString::to_string).collect() })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut notes = Vec::new();
    if alpha.is_zero() {
        notes.push("constants are invariant and are not listed".into());
    }
    if !alpha.is_zero() && m.dim() > 0 && m.is_perfect() {
        notes.push("the algebra equals its derived algebra, so a nonzero alpha admits no relative invariants".into());
    }
    let resonance = match m.diagonal_profile() {
        Some(profile) if m.dim() == 1 => {
            let sigma: Vec<Rational> = profile.forms.iter().map(|f| f[0].clone()).collect();
            Some(resonance_lattice(&sigma, s.max_degree))
        }
        _ => None,
    };
    Ok(InvariantsReport {
        command: "invariants".into(),
        dimension: p.n,
        max_degree: s.max_degree,
        algebra: AlgebraSummary::of(&m),
        alpha: alpha.0.iter().map(format_rational).collect(),
        degrees,
        resonance,
        notes,
    })
}

fn certificate(m: &LieAlgebra, verdict: &FinitenessVerdict, s: &Settings) -> Result<Option<Certificate>> {
    Ok(match verdict {
        FinitenessVerdict::InfiniteCertified { witness } => {
            let c = infinite_certificate(m, witness, 3)?;
            Some(Certificate::Invariant {
                witness: witness.to_string(),
                powers_checked: c.powers_checked,
                passed: c.passed,
            })
        }
        FinitenessVerdict::FiniteCertified { max_degree, combination, spectrum } => {
            let g = centralizer_up_to(m, (*max_degree).min(s.max_degree.max(1)));
            let nilpotency = if *max_degree <= s.max_degree.max(1) { Some(nilpotency_witness(&g, verdict)?) } else { None };
            Some(Certificate::SameSignCombination {
                combination: FinitenessReport::combination_strings(combination),
                spectrum: FinitenessReport::combination_strings(spectrum),
                max_degree: *max_degree,
                nilpotency,
            })
        }
        FinitenessVerdict::Undetermined { .. } => None,
    })
}

pub fn finiteness(p: &Problem, s: &Settings) -> Result<FinitenessReport> {
    let m = p.algebra(s.cap)?;
    let verdict = finiteness_report(&m, s.max_degree);
    Ok(FinitenessReport {
        command: "finiteness".into(),
        dimension: p.n,
        max_degree: s.max_degree,
        algebra: AlgebraSummary::of(&m),
        verdict: FinitenessReport::verdict_tag(&verdict),
        certificate: certificate(&m, &verdict, s)?,
        searched_bound: match verdict {
            FinitenessVerdict::Undetermined { searched_bound } => Some(searched_bound),
            _ => None,
        },
    })
}

/// Inputs of `solve` after flags and file options are merged.
#[derive(Clone, Debug)]
pub struct SolveInputs {
    pub y0: Option<Vec<Rational>>,
    pub t0: Option<Rational>,
    pub window: Option<Window>,
    pub tolerance: f64,
}

struct Solved {
    report: SolveReport,
    exact_ok: bool,
}

fn solve_inner(p: &Problem, s: &Settings, inputs: &SolveInputs) -> Result<Solved> {
    let y = inputs
        .y0
        .clone()
        .or_else(|| p.y0.clone())
        .ok_or_else(|| CentraError::Invalid("an initial value is required (--y0 or options.y0)".into()))?;
    CentraError::check_dim(p.n, y.len())?;
    let t0 = inputs.t0.clone().or_else(|| p.t0.clone()).unwrap_or_else(|| rat(0));
    let m = p.algebra(s.cap)?;
    let y_f: Vec<f64> = y.iter().map(to_f64).collect();
    let t0_f = to_f64(&t0);

    let (method, family, system, linear, transport, x, residual_is_zero, error) = if let Some(system) = &p.system {
        let family = close_family(&m, &p.seeds, s.cap)?;
        let x = solve_elementary(&family, system, &y, &t0)?;
        let zero = residual(&family, system, &x)?.is_zero();
        let error = inputs
            .window
            .map(|(t_end, steps)| verify_numeric(&x, &family, system, &y, (t0_f, t_end), steps))
            .transpose()?;
        ("family", family, system.clone(), None, None, x, zero, error)
    } else if let Some(q) = &p.field {
        let red = chen_reduce(&m, q, s.max_degree, s.cap)?;
        let x = red.solve(&y, &t0)?;
        let zero = x.derivative().sub(&field_along(q, &x)?)?.is_zero();
        let error = inputs
            .window
            .map(|(t_end, steps)| max_deviation(&x, |_, z: &[f64]| q.eval_f64(z), &y_f, (t0_f, t_end), steps));
        let linear = Some(red.linear.to_strings());
        ("chen", red.family, red.system, linear, Some(red.transport), x, zero, error)
    } else {
        return Err(CentraError::Invalid("the problem has neither a system nor a field to solve".into()));
    };

    let verification = inputs.window.zip(error).map(|((t_end, steps), err)| NumericCheck {
        t_end,
        steps,
        max_abs_error: err,
        tolerance: inputs.tolerance,
        passed: err.is_finite() && err <= inputs.tolerance,
    });
    let starts_right = x.eval_exact(&t0).is_some_and(|v| v == y);
    Ok(Solved {
        exact_ok: residual_is_zero && starts_right,
        report: SolveReport {
            command: "solve".into(),
            dimension: p.n,
            method: method.into(),
            y0: SolveReport::rationals(&y),
            t0: format_rational(&t0),
            family: family.fields().iter().map(VectorField::to_strings).collect(),
            system,
            linear_part: linear,
            transport,
            solution: x.to_records(),
            solution_text: x.components.iter().map(ToString::to_string).collect(),
            residual_is_zero,
            polynomial_in_t: x.is_polynomial(),
            verification,
        },
    })
}

/// Returns the report and whether every requested check passed.
pub fn solve(p: &Problem, s: &Settings, inputs: &SolveInputs) -> Result<(SolveReport, bool)> {
    let solved = solve_inner(p, s, inputs)?;
    let numeric_ok = solved.report.verification.as_ref().is_none_or(|v| v.passed);
    Ok((solved.report, solved.exact_ok && numeric_ok))
}

pub fn normal_form_cmd(p: &Problem, s: &Settings, use_symmetry: bool) -> Result<NormalFormCommandReport> {
    let f = p.field.as_ref().ok_or_else(|| CentraError::Invalid("normal-form needs a field".into()))?;
    let symmetry = if use_symmetry {
        Some(p.symmetry.as_ref().ok_or_else(|| CentraError::Invalid("--symmetry given but the problem has none".into()))?)
    } else {
        None
    };
    let formal = FormalField::from_field(f, s.max_degree)?;
    let nf = normal_form(&formal, s.max_degree, symmetry)?;
    Ok(NormalFormCommandReport {
        command: "normal-form".into(),
        max_degree: s.max_degree,
        symmetry_used: symmetry.is_some(),
        report: nf.report(symmetry),
    })
}

fn outcome(name: &str, passed: bool, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome { name: name.into(), passed, detail: detail.into() }
}

fn as_check(name: &str, r: Result<(bool, String)>) -> CheckOutcome {
    match r {
        Ok((passed, detail)) => outcome(name, passed, detail),
        Err(e) => outcome(name, false, e.to_string()),
    }
}

/// Re-runs every certificate the problem admits and reports one line per check.
pub fn verify(p: &Problem, s: &Settings, inputs: &SolveInputs) -> Result<VerifyReport> {
    let m = p.algebra(s.cap)?;
    let mut checks = vec![outcome("jacobi_identity", m.check_jacobi(), format!("algebra of dimension {}", m.dim()))];

    let g = centralizer_up_to(&m, s.max_degree);
    checks.push(as_check(
        "directional_closure",
        check_directional_closure(&g).map(|r| (r.violations.is_empty(), format!("{} pairs checked", r.pairs_checked))),
    ));

    let verdict = finiteness_report(&m, s.max_degree);
    checks.push(as_check("finiteness_certificate", verdict.verify(&m).map(|ok| (ok, verdict.tag().to_string()))));
    if let FinitenessVerdict::FiniteCertified { max_degree, .. } = &verdict {
        if *max_degree <= s.max_degree {
            checks.push(as_check(
                "nilpotency",
                nilpotency_witness(&g, &verdict)
                    .map(|r| (r.violations.is_empty(), format!("{} pairs checked, d = {}", r.pairs_checked, r.max_degree))),
            ));
        }
    }

    let has_start = inputs.y0.is_some() || p.y0.is_some();
    if (p.system.is_some() || p.field.is_some()) && has_start {
        match solve_inner(p, s, inputs) {
            Ok(solved) => {
                checks.push(outcome("exact_residual", solved.exact_ok, "residual and initial value checked exactly"));
                if let Some(v) = solved.report.verification {
                    checks.push(outcome(
                        "numeric_rk4",
                        v.passed,
                        format!("max error {:e} over {} steps to t = {}", v.max_abs_error, v.steps, v.t_end),
                    ));
                }
            }
            Err(e) => checks.push(outcome("solve", false, e.to_string())),
        }
    }

    if let Some(f) = &p.field {
        if f.linear_part().is_diagonal() {
            checks.push(as_check("normal_form_replay", normal_form_replay(f, s.max_degree, p.symmetry.as_ref())));
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { command: "verify".into(), dimension: p.n, max_degree: s.max_degree, checks, passed })
}

fn normal_form_replay(f: &VectorField, d: u32, symmetry: Option<&centra::QMatrix>) -> Result<(bool, String)> {
    let formal = FormalField::from_field(f, d)?;
    let symmetry = match symmetry {
        Some(a) if centra::polyalg::lie_bracket(&VectorField::linear(a), f)?.is_zero() => Some(a),
        _ => None,
    };
    let nf = normal_form(&formal, d, symmetry)?;
    let mut replay = formal;
    for g in nf.generators.values().filter(|g| !g.is_zero()) {
        replay = push_forward(&replay, g, d)?;
    }
    Ok((replay == nf.normal_form, format!("{} generators replayed", nf.generators.len())))
}
