//! Rational spectra: characteristic polynomials, rational roots and the
//! exponential `e^{tL}` of a matrix with all-rational eigenvalues.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{kernel_basis, rat, solve, QMatrix, Rational};
use crate::error::{CentraError, Result};

/// Coefficients of `det(xI - A)`, lowest degree first; the last entry is 1.
pub fn charpoly(a: &QMatrix) -> Vec<Rational> {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    // Faddeev–LeVerrier.
    let mut m = QMatrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &QMatrix::identity(n).scale(&coeffs[n - k + 1]);
        let am = a * &m;
        coeffs[n - k] = -am.trace() / rat(k as i64);
    }
    coeffs
}

pub fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x - r)`, assuming `r` is a root.
fn deflate(coeffs: &[Rational], r: &Rational) -> Vec<Rational> {
    let deg = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); deg];
    let mut carry = Rational::zero();
    for i in (1..=deg).rev() {
        carry = &coeffs[i] + &carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = BigUint::from(2u32);
    while d <= BigUint::from(TRIAL_LIMIT) && &d * &d <= rest {
        let mut e = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1u32;
    }
    // Whatever survives trial division is treated as prime.
    if rest > BigUint::one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Rational roots with multiplicity, plus the degree of the factor that has
/// no rational roots.
pub fn rational_roots(coeffs: &[Rational]) -> (Vec<(Rational, usize)>, usize) {
    let mut p: Vec<Rational> = coeffs.to_vec();
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let mut roots = Vec::new();
    let mut zero_mult = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if p.len() <= 1 {
        return (roots, 0);
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let nums = divisors(&ints[0].abs().to_biguint().expect("nonnegative"));
    let dens = divisors(&ints[ints.len() - 1].abs().to_biguint().expect("nonnegative"));
    let mut candidates: Vec<Rational> = Vec::new();
    for a in &nums {
        for b in &dens {
            let c = Rational::new(BigInt::from(a.clone()), BigInt::from(b.clone()));
            candidates.push(c.clone());
            candidates.push(-c);
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut found: Vec<(Rational, usize)> = Vec::new();
    for c in candidates {
        let mut mult = 0;
        while p.len() > 1 && eval_poly(&p, &c).is_zero() {
            p = deflate(&p, &c);
            mult += 1;
        }
        if mult > 0 {
            found.push((c, mult));
        }
        if p.len() == 1 {
            break;
        }
    }
    roots.extend(found);
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, p.len() - 1)
}

/// One term `e^{rate·t} · t^power · vector` of an exponential action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpTerm {
    pub rate: Rational,
    pub power: u32,
    pub vector: Vec<Rational>,
}

#[derive(Clone, Debug)]
struct EigenBlock {
    value: Rational,
    multiplicity: usize,
    shifted: QMatrix,
}

/// Generalized eigenspace decomposition of a matrix whose eigenvalues are
/// all rational, enough to write `e^{tL}v` in closed form.
#[derive(Clone, Debug)]
pub struct SpectralSplit {
    dim: usize,
    blocks: Vec<EigenBlock>,
    change: QMatrix,
}

impl SpectralSplit {
    pub fn new(l: &QMatrix) -> Result<Self> {
        let dim = l.rows();
        let (roots, residual) = rational_roots(&charpoly(l));
        if residual > 0 {
            return Err(CentraError::IrrationalSpectrum { residual_degree: residual });
        }
        let mut blocks = Vec::new();
        let mut columns = Vec::new();
        for (value, multiplicity) in roots {
            let shifted = l - &QMatrix::identity(dim).scale(&value);
            let space = kernel_basis(&shifted.pow(multiplicity as u32));
            if space.len() != multiplicity {
                return Err(CentraError::Internal(format!(
                    "generalized eigenspace for {value} has dimension {} instead of {multiplicity}",
                    space.len()
                )));
            }
            columns.extend(space);
            blocks.push(EigenBlock { value, multiplicity, shifted });
        }
        Ok(Self { dim, blocks, change: QMatrix::from_columns(dim, &columns) })
    }

    pub fn eigenvalues(&self) -> Vec<(Rational, usize)> {
        self.blocks.iter().map(|b| (b.value.clone(), b.multiplicity)).collect()
    }

    /// `e^{tL}v = Σ e^{λt} t^k w_{λ,k}`, zero terms omitted, ordered by rate then power.
    pub fn exp_action(&self, v: &[Rational]) -> Vec<ExpTerm> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        if self.dim == 0 {
            return Vec::new();
        }
        let coords = solve(&self.change, v).expect("generalized eigenvectors form a basis");
        let mut out = Vec::new();
        let mut offset = 0;
        for block in &self.blocks {
            let mut w = vec![Rational::zero(); self.dim];
            for j in 0..block.multiplicity {
                let c = &coords[offset + j];
                if c.is_zero() {
                    continue;
                }
                for (i, wi) in w.iter_mut().enumerate() {
                    *wi += c * &self.change[(i, offset + j)];
                }
            }
            offset += block.multiplicity;
            let mut factorial = Rational::one();
            for k in 0..block.multiplicity {
                if w.iter().all(Zero::is_zero) {
                    break;
                }
                if k > 0 {
                    factorial *= rat(k as i64);
                }
                out.push(ExpTerm {
                    rate: block.value.clone(),
                    power: k as u32,
                    vector: w.iter().map(|x| x / &factorial).collect(),
                });
                w = block.shifted.mul_vec(&w);
            }
        }
        out
    }

    /// `e^{tL}` column by column: entry `(i, j)` lists the terms of `(e^{tL})_{ij}`.
    pub fn exp_matrix_terms(&self) -> Vec<Vec<Vec<(Rational, u32, Rational)>>> {
        let mut out = vec![vec![Vec::new(); self.dim]; self.dim];
        for j in 0..self.dim {
            let mut e = vec![Rational::zero(); self.dim];
            e[j] = Rational::one();
            for term in self.exp_action(&e) {
                for (i, v) in term.vector.iter().enumerate() {
                    if !v.is_zero() {
                        out[i][j].push((term.rate.clone(), term.power, v.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Degree of the irrational part, if the spectrum is not fully rational.
pub fn irrational_degree(l: &QMatrix) -> usize {
    rational_roots(&charpoly(l)).1
}

pub fn small_int(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}
