use crate::error::Result;
use crate::exactla::{to_f64, Rational};

use super::exppoly::ExpPolyVec;
use super::family::{ClosedFamily, EDESystem};
use super::solve::seed_coefficients;

/// Classical fourth-order Runge–Kutta; returns the state at each of the `steps + 1` grid points.
pub fn rk4<F>(rhs: F, y0: &[f64], t_range: (f64, f64), steps: usize) -> Vec<(f64, Vec<f64>)>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let (t0, t1) = t_range;
    let h = if steps == 0 { 0.0 } else { (t1 - t0) / steps as f64 };
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(steps + 1);
    out.push((t0, y.clone()));
    let axpy = |y: &[f64], k: &[f64], a: f64| -> Vec<f64> { y.iter().zip(k).map(|(y, k)| y + a * k).collect() };
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        let k1 = rhs(t, &y);
        let k2 = rhs(t + h / 2.0, &axpy(&y, &k1, h / 2.0));
        let k3 = rhs(t + h / 2.0, &axpy(&y, &k2, h / 2.0));
        let k4 = rhs(t + h, &axpy(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.push((t0 + (s + 1) as f64 * h, y.clone()));
    }
    out
}

/// Largest componentwise gap between `solution` and an RK4 integration of `rhs` from `y0`.
pub fn max_deviation<F>(solution: &ExpPolyVec, rhs: F, y0: &[f64], t_range: (f64, f64), steps: usize) -> f64
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    rk4(rhs, y0, t_range, steps)
        .into_iter()
        .flat_map(|(t, y)| {
            let exact = solution.eval_f64(t);
            y.into_iter().zip(exact).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// Checks a closed-form solution of an elementary system against RK4.
pub fn verify_numeric(
    solution: &ExpPolyVec,
    family: &ClosedFamily,
    system: &EDESystem,
    y: &[Rational],
    t_range: (f64, f64),
    steps: usize,
) -> Result<f64> {
    let coeffs = seed_coefficients(family, system)?;
    let seeds: Vec<_> = family.seeds().iter().map(|&s| &family.fields()[s]).collect();
    let rhs = |t: f64, x: &[f64]| {
        let mut out = vec![0.0; x.len()];
        for (s, p) in coeffs.iter().zip(&seeds) {
            let c = s.eval_f64(t);
            if c == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(p.eval_f64(x)) {
                *o += c * v;
            }
        }
        out
    };
    let y0: Vec<f64> = y.iter().map(to_f64).collect();
    Ok(max_deviation(solution, rhs, &y0, t_range, steps))
}
