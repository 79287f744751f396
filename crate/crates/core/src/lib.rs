//! Spectral numerical geometry on the unit sphere.
//!
//! The crate discretizes the round sphere on a pole-free Gauss–Legendre grid and
//! builds, on top of real spherical-harmonic transforms, the pieces needed to
//! check the Kazdan–Warner identity from two directions:
//!
//! * [`conformal`]: metrics `e^{2f} g_{S²}`, their curvature and conformal
//!   Killing fields;
//! * [`lightcone`]: the isometric embedding of such a metric into the future
//!   lightcone of Minkowski space, its null frame and the extrinsic quantities
//!   `χ, χ̄, ζ` together with the Gauss and Codazzi residuals;
//! * [`gauge`]: boost rescalings of the null frame, the divergence-free gauge and
//!   the integrability condition `dK = -½ div χ̂̄`;
//! * [`kazdan_warner`]: the Kazdan–Warner integrals and a line-by-line replay of
//!   the integration-by-parts argument on the embedded surface.
//!
//! [`suite`] strings the checks together into reports consumed by the CLI.
//!
//! With the default `parallel` feature the transforms run ring- and order-wise on
//! rayon; every output is computed by a fixed sequential reduction, so results
//! do not depend on the thread count.

pub mod conformal;
pub mod error;
pub mod function_spec;
pub mod gauge;
pub mod kazdan_warner;
pub mod lightcone;
mod par;
pub mod seeded;
pub mod sphere;
pub mod suite;
pub mod tolerances;

pub use error::{Error, Result};
pub use sphere::{
    CovectorField, ScalarField, SphCoeffs, SphereGrid, SymTensorField, Tensor2Field, VectorField,
};
