//! Central registry of numerical tolerances.
//!
//! Every threshold the toolkit applies is named here with a short
//! justification, so tolerance choices can be audited in one place instead
//! of being scattered as magic numbers through the numerics.

/// Relative floor below which a curve is treated as singular at a point:
/// `|alpha'(s)|` is compared against `REGULARITY_FLOOR * max |alpha'|`.
pub const REGULARITY_FLOOR: f64 = 1e-8;

/// Fourier resolution threshold: the top two modes must carry less than
/// this fraction of the largest coefficient magnitude.
pub const RESOLUTION_FRACTION: f64 = 1e-8;

/// Maximum admissible deviation of a spherical curve from unit norm.
pub const SPHERICAL_NORM_DEFECT: f64 = 1e-9;

/// Curves closer to the origin than this may not be radially projected.
pub const ORIGIN_CLEARANCE: f64 = 1e-6;

/// Absolute tolerance for the adaptive quadrature used in the rotational
/// profile integrals; chosen so that quadrature error never dominates the
/// 1e-8-level acceptance checks.
pub const QUADRATURE_ABS_TOL: f64 = 1e-12;

/// Bisection tolerance when inverting the monotone arclength-type maps.
pub const BISECTION_TOL: f64 = 1e-12;

/// Agreement required between the area route and the curvature-integral
/// route for the singular cone angle.
pub const CONE_ANGLE_CONSISTENCY: f64 = 1e-6;

/// Power-series tail bound that defines the trusted strip height.
pub const STRIP_TAIL_BOUND: f64 = 1e-8;

/// Trusted strip heights below this are reported as divergence.
pub const STRIP_DIVERGENCE_FLOOR: f64 = 1e-3;

/// Unit-norm defect allowed for the layer-by-layer Gauss-map series.
pub const GAUSS_NORM_DEFECT: f64 = 1e-10;

/// Mixed-partial compatibility residual allowed when integrating the
/// surface from its Gauss map (coefficient-level check).
pub const COMPATIBILITY_DEFECT: f64 = 1e-9;

/// Compatibility residual beyond which integration refuses to produce a
/// surface at all.
pub const INTEGRABILITY_ABORT: f64 = 1e-6;

/// Tangency and conformality defects allowed on sampled patches.
pub const PATCH_FRONTAL_DEFECT: f64 = 1e-9;

/// Agreement required between the two independent routes to the quadratic
/// differential (position route and normal route).
pub const Q_ROUTE_AGREEMENT: f64 = 1e-9;

/// Structural residual budget (curvature, holomorphicity, compatibility of
/// the conformal factors, elliptic sinh equation) on trusted strips.
pub const STRUCTURAL_RESIDUAL: f64 = 1e-6;

/// Defect allowed in the axis identity linking the strip function's normal
/// derivative to the curve-side invariant.
pub const BOUNDARY_IDENTITY_DEFECT: f64 = 1e-8;

/// Umbilic exclusion: points where `|Q|` falls below this fraction of the
/// local scale (the conformal factor on patches, the strip maximum in the
/// series engine) are excluded from divisions by `|Q|`.
pub const UMBILIC_FRACTION: f64 = 1e-8;

/// Default exclusion band around the singular axis when sampling patches
/// for curvature work.
pub const AXIS_EXCLUSION: f64 = 1e-3;

/// Half-windows (in the curve parameter) over which cusp limits are fit.
pub const CUSP_WINDOW: (f64, f64) = (1e-3, 1e-2);

/// Relative stabilisation required between full-window and half-window
/// cusp-limit fits.
pub const CUSP_STABILISATION: f64 = 1e-6;

/// Normals closer to the horizon than this block the support transform.
pub const HORIZON_FLOOR: f64 = 1e-6;

/// Relative area floor below which a shifted parallel sample counts as
/// degenerate and is flagged.
pub const PARALLEL_DEGENERACY: f64 = 1e-9;

/// Relative floor on `det I` below which raw curvature samples are
/// recorded as undefined instead of dividing by a vanishing metric.
pub const METRIC_DEGENERACY: f64 = 1e-24;

/// Convergence requirement for the Newton iteration that inverts the
/// horizontal projection when extracting a height graph.
pub const GRAPH_NEWTON: f64 = 1e-12;

/// Relative floor under which a scanned strip-function sample counts as
/// a zero (failing the off-axis nonvanishing scan).
pub const SCAN_FLOOR: f64 = 1e-9;

/// Relative area floor below which an exported quad face counts as
/// degenerate.
pub const DEGENERATE_FACE_FRACTION: f64 = 1e-12;

/// Residual allowed for the independent graph-based curvature equation on
/// a locally extracted height graph.
pub const MONGE_GRAPH_RESIDUAL: f64 = 1e-4;

/// Curvature-residual level that flags a corrupted or non-unit-curvature
/// patch (a 1% metric scaling produces about 0.0197).
pub const CORRUPTION_FLOOR: f64 = 0.015;
