//! Exact computation of polynomial centralizers of linear Lie algebras.
//!
//! Everything here works over the rationals. The modules build on each other
//! bottom-up:
//!
//! - [`exactla`]: rationals, dense and sparse exact linear algebra, rational spectra.
//! - [`polyalg`]: sparse polynomials, polynomial vector fields, the Lie bracket
//!   `[f, g] = Dg·f - Df·g` and the directional product `Dp·q`.
//! - [`liealg`]: bracket closure, derived series and diagonal profiles of matrix algebras.
//! - [`equivariance`]: graded centralizers, closure and nilpotency checks, finiteness verdicts.
//! - [`invariants`]: invariants, relative invariants and resonance lattices.
//! - [`superposition`]: exp-polynomial closed-form solutions and the Chen reduction.
//! - [`normalform`]: symmetry-constrained formal Poincaré–Dulac normal forms.
//! - [`problem`]: the JSON problem-file format.

pub mod equivariance;
pub mod error;
pub mod exactla;
mod graded;
pub mod invariants;
pub mod liealg;
pub mod normalform;
pub mod polyalg;
pub mod problem;
pub mod superposition;

pub use error::{CentraError, Result};
pub use exactla::{QMatrix, Rational};
pub use liealg::LieAlgebra;
pub use polyalg::{Monomial, Poly, VectorField};
