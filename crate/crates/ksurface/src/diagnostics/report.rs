//! Aggregated verification report and its JSON serialization.
//!
//! The writer is deliberately hand-rolled: field order is fixed by
//! construction and every float is emitted with 17 significant digits,
//! so identical runs produce byte-identical reports (a documented
//! contract of the command-line driver).

use crate::curve::ConeAngleRecord;

use super::integrals::AnnulusRow;

/// One residual beyond its tolerance.
#[derive(Debug, Clone)]
pub struct Violation {
    pub check: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

/// A documented, deliberately unresolved discrepancy, reported with the
/// measured number so downstream readers can track it.
#[derive(Debug, Clone)]
pub struct KnownIssue {
    pub id: &'static str,
    pub detail: String,
    pub value: f64,
}

/// Residual maxima in one flat record.
#[derive(Debug, Clone)]
pub struct ResidualSummary {
    /// Mixed-partial compatibility of the surface integration.
    pub compat: f64,
    /// Frontal/conformality bundle on the sampled patch.
    pub frontal: f64,
    /// `max |K_raw - 1|`.
    pub k_minus_1: f64,
    /// Antiholomorphic derivative of the conformal coefficient.
    pub holo_q: f64,
    /// `rho^2 = mu^2 - |Q|^2` defect.
    pub rho_identity: f64,
    /// Laplacian balance of the strip function; `None` when skipped
    /// (no series, or umbilic exclusion).
    pub sinh_gordon: Option<f64>,
    /// Raw vs conformal mean curvature.
    pub h_consistency: f64,
    /// `mu/rho` vs the hyperbolic cotangent of the strip function.
    pub coth_consistency: f64,
    /// Representation-formula defect on the patch samples.
    pub representation: f64,
    /// Two-route agreement for the conformal coefficient.
    pub q_route: f64,
    /// Axis identity defect (companion form, see known issues).
    pub boundary_omega: f64,
}

/// Everything one verification run established.
#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    /// Description of the curve source (builtin name or file path).
    pub input: String,
    /// Curve classification verdict.
    pub verdict: String,
    /// Whether every enabled check passed its tolerance.
    pub pass: bool,
    pub trust_height: f64,
    pub umbilic_fraction: f64,
    pub residuals: ResidualSummary,
    /// Cone angle by both routes; absent for non-Jordan data.
    pub cone_angle: Option<ConeAngleRecord>,
    /// Widest-annulus values (last row of the table).
    pub area: f64,
    pub total_mean_curvature: f64,
    pub area_table: Vec<AnnulusRow>,
    /// Whether the strip function stays nonzero off the axis.
    pub singular_scan: bool,
    /// Measured ratio between the axis derivative of the strip
    /// function and the curve-side invariant.
    pub omega_v_ratio: f64,
    pub known_issues: Vec<KnownIssue>,
    pub violations: Vec<Violation>,
}

/// 17 significant digits; JSON has no inf/nan, so non-finite values
/// serialize as null.
fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), fmt_f64)
}

fn fmt_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(2048);
        out.push_str("{\n");
        out.push_str(&format!("  \"input\": {},\n", fmt_str(&self.input)));
        out.push_str(&format!("  \"verdict\": {},\n", fmt_str(&self.verdict)));
        out.push_str(&format!("  \"pass\": {},\n", self.pass));
        out.push_str(&format!(
            "  \"trust_height\": {},\n",
            fmt_f64(self.trust_height)
        ));
        out.push_str(&format!(
            "  \"umbilic_fraction\": {},\n",
            fmt_f64(self.umbilic_fraction)
        ));

        let r = &self.residuals;
        out.push_str("  \"residuals\": {\n");
        out.push_str(&format!("    \"compat\": {},\n", fmt_f64(r.compat)));
        out.push_str(&format!("    \"frontal\": {},\n", fmt_f64(r.frontal)));
        out.push_str(&format!("    \"k_minus_1\": {},\n", fmt_f64(r.k_minus_1)));
        out.push_str(&format!("    \"holo_q\": {},\n", fmt_f64(r.holo_q)));
        out.push_str(&format!(
            "    \"rho_identity\": {},\n",
            fmt_f64(r.rho_identity)
        ));
        out.push_str(&format!(
            "    \"sinh_gordon\": {},\n",
            fmt_opt(r.sinh_gordon)
        ));
        out.push_str(&format!(
            "    \"h_consistency\": {},\n",
            fmt_f64(r.h_consistency)
        ));
        out.push_str(&format!(
            "    \"coth_consistency\": {},\n",
            fmt_f64(r.coth_consistency)
        ));
        out.push_str(&format!(
            "    \"representation\": {},\n",
            fmt_f64(r.representation)
        ));
        out.push_str(&format!("    \"q_route\": {},\n", fmt_f64(r.q_route)));
        out.push_str(&format!(
            "    \"boundary_omega\": {}\n",
            fmt_f64(r.boundary_omega)
        ));
        out.push_str("  },\n");

        match &self.cone_angle {
            Some(c) => {
                out.push_str("  \"cone_angle\": {\n");
                out.push_str(&format!(
                    "    \"from_area\": {},\n",
                    fmt_f64(c.from_area)
                ));
                out.push_str(&format!(
                    "    \"from_turning\": {},\n",
                    fmt_f64(c.from_turning)
                ));
                out.push_str(&format!(
                    "    \"agreement\": {}\n",
                    fmt_f64(c.agreement)
                ));
                out.push_str("  },\n");
            }
            None => out.push_str("  \"cone_angle\": null,\n"),
        }

        out.push_str(&format!("  \"area\": {},\n", fmt_f64(self.area)));
        out.push_str(&format!(
            "  \"total_mean_curvature\": {},\n",
            fmt_f64(self.total_mean_curvature)
        ));

        out.push_str("  \"area_table\": [");
        for (i, row) in self.area_table.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "\n    {{ \"v_lo\": {}, \"area\": {}, \"total_mean_curvature\": {} }}",
                fmt_f64(row.v_lo),
                fmt_f64(row.area),
                fmt_f64(row.total_mean_curvature)
            ));
        }
        if !self.area_table.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("],\n");

        out.push_str(&format!("  \"singular_scan\": {},\n", self.singular_scan));
        out.push_str(&format!(
            "  \"omega_v_ratio\": {},\n",
            fmt_f64(self.omega_v_ratio)
        ));

        out.push_str("  \"known_issues\": [");
        for (i, issue) in self.known_issues.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "\n    {{ \"id\": {}, \"detail\": {}, \"value\": {} }}",
                fmt_str(issue.id),
                fmt_str(&issue.detail),
                fmt_f64(issue.value)
            ));
        }
        if !self.known_issues.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("],\n");

        out.push_str("  \"violations\": [");
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "\n    {{ \"check\": {}, \"value\": {}, \"tolerance\": {} }}",
                fmt_str(v.check),
                fmt_f64(v.value),
                fmt_f64(v.tolerance)
            ));
        }
        if !self.violations.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n");

        out.push_str("}\n");
        out
    }
}
