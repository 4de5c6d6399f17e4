//! Error types shared across the toolkit.
//!
//! Every failure mode that the numerical pipeline can hit is a distinct
//! variant, so callers (and the CLI exit-code mapping) can react to the
//! class of failure rather than parsing message strings.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A derivative of higher order than the supported jet was requested.
    #[error("derivative order {order} not supported (maximum {max})")]
    UnsupportedOrder { order: usize, max: usize },

    /// Trailing Fourier modes carry too much energy for the result to be
    /// trusted; the input needs more modes or a smoother generator.
    #[error("under-resolved Fourier data: tail magnitude {tail:.3e} exceeds {threshold:.3e}")]
    UnderResolved { tail: f64, threshold: f64 },

    /// A curve operation was evaluated at (or too near) a point where the
    /// parametrisation is singular.
    #[error("curve speed {speed:.3e} at s = {s:.6} is below the regularity floor {floor:.3e}")]
    SingularPoint { s: f64, speed: f64, floor: f64 },

    /// The limit defining a cusp invariant failed to stabilise over
    /// shrinking windows; the values per window are carried for inspection.
    #[error("cusp limit at s = {s0:.6} did not stabilise: window estimates {estimates:?}")]
    NonAdmissibleCusp { s0: f64, estimates: Vec<f64> },

    /// The operation requires a closed embedded (Jordan) curve.
    #[error("operation requires a simple closed curve: {reason}")]
    NotJordan { reason: String },

    /// Two independent evaluation routes disagreed beyond tolerance.
    #[error("{what}: routes disagree by {defect:.3e} (tolerance {tolerance:.3e})")]
    RouteMismatch {
        what: &'static str,
        defect: f64,
        tolerance: f64,
    },

    /// A curve intended to lie on the unit sphere does not.
    #[error("spherical norm defect {defect:.3e} exceeds {tolerance:.3e}")]
    NormDefect { defect: f64, tolerance: f64 },

    /// A planar curve passed through (or too close to) the origin, so the
    /// radial projection onto the sphere is ill-defined.
    #[error("curve passes within {min_norm:.3e} of the origin; radial projection rejected")]
    OriginCrossing { min_norm: f64 },

    /// Scalar arguments were outside the documented domain.
    #[error("argument out of domain: {reason}")]
    Domain { reason: String },

    /// An integral in the construction diverges for the requested parameter.
    #[error("divergent integral: {reason}")]
    DivergentIntegral { reason: String },

    /// The power series in the strip direction shows no usable region of
    /// convergence.
    #[error("series divergence: trusted strip height {trust_height:.3e} below {floor:.3e}")]
    Divergence { trust_height: f64, floor: f64 },

    /// An evaluation outside the trusted strip was requested.
    #[error("v = {v:.6} is outside the trusted strip height {trust_height:.6}")]
    Extrapolation { v: f64, trust_height: f64 },

    /// The mixed-partial compatibility residual of the surface integration
    /// is too large for the output to be meaningful.
    #[error("integrability failure: compatibility residual {residual:.3e} exceeds {tolerance:.3e}")]
    Integrability { residual: f64, tolerance: f64 },

    /// The patch is not conformally parametrised, but the operation
    /// requires conformal coordinates.
    #[error("patch is not conformally parametrised for the second fundamental form ({reason})")]
    Parametrization { reason: String },

    /// The Gauss map meets the horizon (third component near zero), so the
    /// support-style transform is undefined.
    #[error("normal too close to the horizon at {count} samples (min |N3| = {min_n3:.3e})")]
    Horizon { count: usize, min_n3: f64 },

    /// A graph could not be extracted from the patch.
    #[error("graph extraction failed: {reason}")]
    GraphExtraction { reason: String },

    /// Mesh export refused because faces would be degenerate.
    #[error("mesh export refused: {count} degenerate faces (first at row {row}, column {col})")]
    DegenerateFace { count: usize, row: usize, col: usize },

    /// The singularity structure is degenerate: the construction would not
    /// produce an isolated singular point.
    #[error("isolated-singularity violation: {reason}")]
    SingularityViolation { reason: String },

    /// Configuration or input deserialisation problem.
    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    ///
    /// 2: a numerical verification failed its tolerance.
    /// 3: the input itself was rejected.
    /// 4: a series or iteration diverged.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RouteMismatch { .. }
            | Error::Integrability { .. }
            | Error::SingularityViolation { .. }
            | Error::DegenerateFace { .. } => 2,
            Error::Divergence { .. } | Error::Extrapolation { .. } => 4,
            _ => 3,
        }
    }
}
