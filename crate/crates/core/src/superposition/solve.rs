use crate::error::{CentraError, Result};
use crate::exactla::Rational;

use super::exppoly::{substitute, ExpPoly, ExpPolyVec};
use super::family::{ClosedFamily, EDESystem};

/// Combined time coefficient `S_j(t) = Σ σ(t) e^{rate·t}` for each seed.
pub fn seed_coefficients(family: &ClosedFamily, system: &EDESystem) -> Result<Vec<ExpPoly>> {
    system.check_against(family)?;
    let mut out = vec![ExpPoly::zero(); family.seeds().len()];
    for term in &system.terms {
        for (k, c) in term.sigma.iter().enumerate() {
            out[term.seed].add_term(term.rate.clone(), k as u32, c.clone());
        }
    }
    Ok(out)
}

/// Evaluates a vector field along a curve.
pub fn field_along(f: &crate::polyalg::VectorField, x: &ExpPolyVec) -> Result<ExpPolyVec> {
    let components = f.components().iter().map(|p| substitute(p, x)).collect::<Result<_>>()?;
    Ok(ExpPolyVec { components })
}

/// Closed-form solution of `ẋ = Σ_j S_j(t) p_j(x)`, `x(t0) = y`.
///
/// Each family member `u` contributes the curve `w_u(t) = u(x(t))`, which
/// satisfies `ẇ_u = Σ_j S_j Σ_k c_{u,j,k} w_{u_k}` with every `u_k` of strictly
/// higher degree. The curves are therefore integrated from the top degree down,
/// and finally `x = y + ∫ Σ_j S_j w_{p_j}`.
///
/// With `t0 ≠ 0` only systems whose quadratures stay polynomial are supported.
pub fn solve_elementary(family: &ClosedFamily, system: &EDESystem, y: &[Rational], t0: &Rational) -> Result<ExpPolyVec> {
    let n = family.ambient();
    CentraError::check_dim(n, y.len())?;
    let coeffs = seed_coefficients(family, system)?;

    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(family.degree(i)), i));

    let mut curves: Vec<Option<ExpPolyVec>> = vec![None; family.len()];
    for &i in &order {
        let u = &family.fields()[i];
        let start = u.eval(y)?;
        let mut rhs = ExpPolyVec::zero(n);
        for (j, s) in coeffs.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for (k, c) in family.table()[i][j].iter().enumerate() {
                if num_traits::Zero::is_zero(c) {
                    continue;
                }
                let w = curves[k]
                    .as_ref()
                    .ok_or_else(|| CentraError::Internal("family table is not triangular".into()))?;
                rhs = rhs.add(&w.mul_scalar(s).scale(c))?;
            }
        }
        curves[i] = Some(rhs.integrate(t0, &start)?);
    }

    let mut velocity = ExpPolyVec::zero(n);
    for (j, s) in coeffs.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        let w = curves[family.seeds()[j]].as_ref().expect("every member was integrated");
        velocity = velocity.add(&w.mul_scalar(s))?;
    }
    velocity.integrate(t0, y)
}

/// `ẋ(t) − Σ_j S_j(t) p_j(x(t))`, expanded exactly.
pub fn residual(family: &ClosedFamily, system: &EDESystem, x: &ExpPolyVec) -> Result<ExpPolyVec> {
    let coeffs = seed_coefficients(family, system)?;
    let mut out = x.derivative();
    for (j, s) in coeffs.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        let p = &family.fields()[family.seeds()[j]];
        out = out.sub(&field_along(p, x)?.mul_scalar(s))?;
    }
    Ok(out)
}
