//! Closed-form solutions of `ẋ = Σ σ_j(t) e^{α_j t} p_j(x)` when the `p_j` lie
//! in a finite-dimensional centralizer.
//!
//! The seeds are closed under `u ↦ Du·p_j`, which raises degree, so the
//! augmented system for the curves `u(x(t))` is triangular and integrates by
//! successive quadratures of exp-polynomials. Autonomous fields `Bx + q̃` are
//! first reduced through `x = e^{tB} z`.

mod chen;
mod exppoly;
mod family;
mod numeric;
mod solve;

pub use chen::{chen_reduce, ChenReduction};
pub use exppoly::{integrate_exppoly, substitute, ExpPoly, ExpPolyVec, ExpRecord};
pub use family::{close_family, ClosedFamily, EDESystem, EdeTerm};
pub use numeric::{max_deviation, rk4, verify_numeric};
pub use solve::{field_along, residual, seed_coefficients, solve_elementary};
