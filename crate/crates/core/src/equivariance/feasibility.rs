//! Fourier–Motzkin search for a coefficient vector `c` with `A·c > 0` componentwise.

use num_traits::{One, Signed, Zero};

use crate::exactla::Rational;

/// `coeffs · c >= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    coeffs: Vec<Rational>,
    bound: Rational,
}

impl Ineq {
    /// Scales so the last nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().rev().find(|c| !c.is_zero()).map(Signed::abs) {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &lead;
            }
            self.bound = &self.bound / &lead;
        }
        self
    }
}

/// Value for a variable bounded by `lower <= x <= upper` (either side optional):
/// zero if allowed, otherwise the admissible integer nearest zero, otherwise the
/// binding bound.
fn pick(lower: Option<Rational>, upper: Option<Rational>) -> Option<Rational> {
    if let (Some(l), Some(u)) = (&lower, &upper) {
        if l > u {
            return None;
        }
    }
    let zero = Rational::zero();
    if lower.as_ref().is_none_or(|l| *l <= zero) && upper.as_ref().is_none_or(|u| *u >= zero) {
        return Some(zero);
    }
    if let Some(l) = lower.clone().filter(|l| *l > zero) {
        let c = l.ceil();
        return Some(if upper.as_ref().is_none_or(|u| c <= *u) { c } else { l });
    }
    let u = upper.expect("one bound is binding");
    let f = u.floor();
    Some(if lower.as_ref().is_none_or(|l| f >= *l) { f } else { u })
}

/// Finds rational `c` with `Σ_j rows[i][j]·c_j > 0` for every `i`.
///
/// The strict system is homogeneous, so it is feasible iff `rows·c >= 1` is.
/// Variables are eliminated from the last to the first and then
/// back-substituted in order, which makes the returned vertex deterministic.
pub fn positive_combination(rows: &[Vec<Rational>], nvars: usize) -> Option<Vec<Rational>> {
    if nvars == 0 {
        return rows.is_empty().then(Vec::new);
    }
    let initial: Vec<Ineq> = rows
        .iter()
        .map(|r| Ineq { coeffs: r.clone(), bound: Rational::one() }.normalized())
        .collect();
    // levels[v] holds the system in variables 0..=v.
    let mut levels: Vec<Vec<Ineq>> = vec![Vec::new(); nvars];
    levels[nvars - 1] = dedup(initial);
    for v in (1..nvars).rev() {
        let sys = &levels[v];
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for ineq in sys {
            let a = &ineq.coeffs[v];
            if a.is_zero() {
                next.push(ineq.clone());
            } else if a.is_positive() {
                pos.push(ineq);
            } else {
                neg.push(ineq);
            }
        }
        for p in &pos {
            for q in &neg {
                let (wp, wq) = (-q.coeffs[v].clone(), p.coeffs[v].clone());
                let coeffs = p.coeffs.iter().zip(&q.coeffs).map(|(a, b)| a * &wp + b * &wq).collect();
                let bound = &p.bound * &wp + &q.bound * &wq;
                next.push(Ineq { coeffs, bound }.normalized());
            }
        }
        levels[v - 1] = dedup(next);
    }
    let mut values: Vec<Rational> = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for ineq in &levels[v] {
            // Residual bound after substituting already fixed variables.
            let fixed: Rational = ineq.coeffs[..v].iter().zip(&values).map(|(a, x)| a * x).sum();
            let rest = &ineq.bound - fixed;
            let a = &ineq.coeffs[v];
            if a.is_zero() {
                if ineq.coeffs[v + 1..].iter().all(Zero::is_zero) && rest.is_positive() {
                    return None;
                }
                continue;
            }
            let b = rest / a;
            if a.is_positive() {
                lower = Some(lower.map_or(b.clone(), |l| l.max(b)));
            } else {
                upper = Some(upper.map_or(b.clone(), |u| u.min(b)));
            }
        }
        values.push(pick(lower, upper)?);
    }
    let ok = rows.iter().all(|r| r.iter().zip(&values).map(|(a, x)| a * x).sum::<Rational>().is_positive());
    ok.then_some(values)
}

fn dedup(mut v: Vec<Ineq>) -> Vec<Ineq> {
    let mut out: Vec<Ineq> = Vec::with_capacity(v.len());
    for ineq in v.drain(..) {
        if !out.contains(&ineq) {
            out.push(ineq);
        }
    }
    out
}
