//! Sparse multivariate polynomials over the rationals and polynomial vector fields.
//!
//! The Lie bracket follows the convention `[f, g](x) = Dg(x)f(x) - Df(x)g(x)`,
//! under which `X_f X_g - X_g X_f = X_{[f,g]}` for the derivations
//! `X_f = Σ f_i ∂/∂x_i`. With it, the bracket of two linear fields is
//! `[Bx, Cx] = (CB - BC)x`, the opposite of the matrix commutator.

mod field;
mod monomial;
mod parse;
mod poly;

pub use field::{directional, homogeneous_components, jacobian, lie_bracket, lie_derivative, VectorField};
pub use monomial::{monomials_of_degree, Monomial};
pub use poly::Poly;
