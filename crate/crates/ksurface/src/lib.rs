//! Numerical construction of surfaces of constant Gaussian curvature one
//! in Euclidean three-space with isolated conical singularities, starting
//! from closed spherical Cauchy data, together with the diagnostics that
//! verify every structural identity such a surface must satisfy.
//!
//! The pipeline runs in stages:
//!
//! 1. [`curve`] — validate and classify the spherical datum (convexity,
//!    cusps, embeddedness), compute curve invariants and the singular
//!    cone angle by two independent routes.
//! 2. [`cauchy`] — extend the datum to a harmonic map of a strip into the
//!    sphere by an explicit layer-by-layer power-series recursion in the
//!    strip coordinate.
//! 3. [`surface`] — integrate the moving frame into a surface patch with
//!    Gaussian curvature one; exact closed forms for rotationally
//!    symmetric data; parallel constant-mean-curvature companions,
//!    reflection extension, and the contact-geometry dual patch.
//! 4. [`diagnostics`] — residuals for every structural identity
//!    (curvature, holomorphicity of the quadratic differential, the
//!    elliptic equation for the conformal factor, boundary identities at
//!    the singular axis, geometric integrals, and an independent
//!    graph-based curvature check).
//! 5. [`io`] + [`pipeline`] — deterministic JSON/OBJ/CSV artefacts and
//!    the end-to-end driver used by the command-line interface.

pub mod cauchy;
pub mod curve;
pub mod diagnostics;
pub mod error;
pub mod fourier;
pub mod io;
pub mod pipeline;
pub mod quad;
pub mod surface;
pub mod tol;

pub use error::{Error, Result};
