//! Discretization of the unit round sphere.
//!
//! Nodes sit on a Gauss–Legendre × equispaced-longitude product grid, so no
//! node touches a pole. Tensor fields are stored by their components in the
//! orthonormal frame `e₁ = ∂_θ`, `e₂ = (1/sin θ) ∂_φ`, oriented so that
//! `ε(e₁, e₂) = +1`.

mod fields;
mod grid;
mod legendre;
mod operators;
mod transform;

pub use fields::{CovectorField, ScalarField, SymTensorField, Tensor2Field, VectorField};
pub use grid::{NodeFrame, SphereGrid};
pub use legendre::{gauss_legendre, real_ylm};
pub use transform::SphCoeffs;
