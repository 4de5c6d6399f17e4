//! Area and total-mean-curvature tables on truncated annuli.
//!
//! Both integrals are improper at the singular axis; finiteness is a
//! structural claim about the construction. At desk scale the honest
//! statement is a convergence table: integrate over `[v_min, v_top]`
//! for a shrinking sequence of `v_min` and report the increments.

use crate::error::{Error, Result};
use crate::surface::SurfacePatch;
use crate::tol;

/// One truncated annulus: everything from `v_lo` up to the top of the
/// patch, all the way around in `u`.
#[derive(Debug, Clone, Copy)]
pub struct AnnulusRow {
    /// Lower integration bound actually used (snapped to the grid).
    pub v_lo: f64,
    pub area: f64,
    pub total_mean_curvature: f64,
}

/// Rows ordered by decreasing `v_lo` — each annulus contains the ones
/// before it.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub rows: Vec<AnnulusRow>,
}

impl ConvergenceTable {
    /// Both columns must grow as the annulus grows (the integrands are
    /// non-negative); allows exact ties for degenerate patches.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| {
            w[1].area >= w[0].area && w[1].total_mean_curvature >= w[0].total_mean_curvature
        })
    }

    /// Ratio of the last increment to the one before, per column; the
    /// Cauchy-style evidence that the integrals converge as `v_lo`
    /// shrinks. `None` with fewer than three rows or a vanishing
    /// denominator.
    pub fn convergence_ratios(&self) -> Option<(f64, f64)> {
        let n = self.rows.len();
        if n < 3 {
            return None;
        }
        let da1 = self.rows[n - 1].area - self.rows[n - 2].area;
        let da0 = self.rows[n - 2].area - self.rows[n - 3].area;
        let dt1 = self.rows[n - 1].total_mean_curvature - self.rows[n - 2].total_mean_curvature;
        let dt0 = self.rows[n - 2].total_mean_curvature - self.rows[n - 3].total_mean_curvature;
        (da0 != 0.0 && dt0 != 0.0).then(|| (da1 / da0, dt1 / dt0))
    }

    /// Largest annulus (the last row).
    pub fn widest(&self) -> Option<&AnnulusRow> {
        self.rows.last()
    }
}

/// Integrate the area element and `|H|` times it over truncated annuli.
///
/// `u` runs a full period (rectangle rule, spectrally accurate for the
/// periodic integrand); `v` uses the trapezoid rule on the patch
/// columns at or above each requested lower bound, which is snapped to
/// the grid and recorded. Samples with a degenerate metric contribute
/// zero to both columns — on a degenerate patch the area measure itself
/// vanishes.
pub fn area_and_tmc(patch: &SurfacePatch, v_mins: &[f64]) -> Result<ConvergenceTable> {
    if !patch.u_periodic {
        return Err(Error::Domain {
            reason: "annulus integrals need a full-period patch".to_string(),
        });
    }
    if v_mins.is_empty() {
        return Err(Error::Domain {
            reason: "no lower bounds requested".to_string(),
        });
    }
    let vs = &patch.vs;
    if vs.first().copied().unwrap_or(f64::NAN) <= 0.0 {
        return Err(Error::Domain {
            reason: "annulus integrals are defined on the positive nappe".to_string(),
        });
    }

    // Per-sample integrands.
    let mut area_density = vec![0.0; patch.len()];
    let mut tmc_density = vec![0.0; patch.len()];
    for at in 0..patch.len() {
        let xu = &patch.x_u[at];
        let xv = &patch.x_v[at];
        let e = xu.norm_squared();
        let g = xv.norm_squared();
        let f = xu.dot(xv);
        let det = e * g - f * f;
        let scale = (e + g).powi(2).max(f64::MIN_POSITIVE);
        if det <= tol::METRIC_DEGENERACY * scale || patch.singular[at] {
            continue;
        }
        let w = det.sqrt();
        let n_hat = xu.cross(xv) / w;
        let l = patch.x_uu[at].dot(&n_hat);
        let m = patch.x_uv[at].dot(&n_hat);
        let n2 = patch.x_vv[at].dot(&n_hat);
        area_density[at] = w;
        tmc_density[at] = (l * g - 2.0 * m * f + n2 * e).abs() / (2.0 * w);
    }

    let du = std::f64::consts::TAU / patch.u_count() as f64;
    // Collapse the u-direction first: column integrals over u.
    let mut area_col = vec![0.0; vs.len()];
    let mut tmc_col = vec![0.0; vs.len()];
    for i in 0..patch.u_count() {
        for j in 0..vs.len() {
            let at = patch.idx(i, j);
            area_col[j] += area_density[at] * du;
            tmc_col[j] += tmc_density[at] * du;
        }
    }

    let mut rows = Vec::with_capacity(v_mins.len());
    for &v_min in v_mins {
        let j0 = vs
            .iter()
            .position(|&v| v >= v_min - 1e-12)
            .ok_or_else(|| Error::Domain {
                reason: format!("lower bound {v_min} above the whole patch"),
            })?;
        if vs.len() - j0 < 2 {
            return Err(Error::Domain {
                reason: format!("lower bound {v_min} leaves fewer than two columns"),
            });
        }
        let mut area = 0.0;
        let mut tmc = 0.0;
        for j in j0..vs.len() - 1 {
            let dv = vs[j + 1] - vs[j];
            area += 0.5 * dv * (area_col[j] + area_col[j + 1]);
            tmc += 0.5 * dv * (tmc_col[j] + tmc_col[j + 1]);
        }
        rows.push(AnnulusRow {
            v_lo: vs[j0],
            area,
            total_mean_curvature: tmc,
        });
    }

    // Present the table widest-last so increments read as refinements.
    rows.sort_by(|a, b| b.v_lo.total_cmp(&a.v_lo));
    Ok(ConvergenceTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cauchy::solve_cauchy;
    use crate::curve::{builtin_circle, builtin_equator};
    use crate::diagnostics::testutil::sphere_band;
    use crate::surface::{integrate_surface, sample_patch};
    use nalgebra::Vector3;

    #[test]
    fn sphere_band_area_matches_the_zone_closed_form() {
        // On the band the area element is sech^2 v du dv, so the area
        // from v1 to v2 is 2 pi (tanh v2 - tanh v1); |H| = 1 makes the
        // second column identical.
        let patch = sphere_band(64, 0.1, 0.9, 1025);
        let table = area_and_tmc(&patch, &[0.1, 0.3, 0.5]).unwrap();
        assert_eq!(table.rows.len(), 3);
        for row in &table.rows {
            let exact =
                std::f64::consts::TAU * (0.9f64.tanh() - row.v_lo.tanh());
            assert!(
                (row.area - exact).abs() < 1e-6,
                "area {} vs zone formula {exact}",
                row.area
            );
            assert!((row.total_mean_curvature - row.area).abs() < 1e-9);
        }
        assert!(table.is_monotone());
    }

    #[test]
    fn singular_axis_integrals_form_a_cauchy_table() {
        let alpha = builtin_circle(0.5).unwrap();
        let jet = solve_cauchy(&alpha, 24, 8).unwrap();
        let sjet = integrate_surface(&jet, Vector3::zeros()).unwrap();
        // Step 0.01 grid so every requested bound lies on a node.
        let patch = sample_patch(&sjet, 48, (0.01, 0.3), 30).unwrap();
        let table = area_and_tmc(&patch, &[0.16, 0.08, 0.04, 0.02, 0.01]).unwrap();
        assert!(table.is_monotone());
        let (ra, rt) = table.convergence_ratios().unwrap();
        // Near the axis the area density shrinks linearly in v and the
        // mean-curvature density stays bounded, so halving the bound
        // quarters the area increment and halves the other one.
        assert!((0.1..0.45).contains(&ra), "area ratio {ra}");
        assert!((0.3..0.7).contains(&rt), "tmc ratio {rt}");
    }

    #[test]
    fn degenerate_patch_has_vanishing_area() {
        let jet = solve_cauchy(&builtin_equator(), 8, 8).unwrap();
        let sjet = integrate_surface(&jet, Vector3::zeros()).unwrap();
        let patch = sample_patch(&sjet, 16, (0.01, 0.3), 9).unwrap();
        let table = area_and_tmc(&patch, &[0.01]).unwrap();
        assert_eq!(table.rows[0].area, 0.0);
        assert_eq!(table.rows[0].total_mean_curvature, 0.0);
    }

    #[test]
    fn annulus_bounds_are_validated() {
        let patch = sphere_band(16, 0.1, 0.5, 9);
        assert!(matches!(
            area_and_tmc(&patch, &[0.7]),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(area_and_tmc(&patch, &[]), Err(Error::Domain { .. })));
        let mut open = sphere_band(16, 0.1, 0.5, 9);
        open.u_periodic = false;
        assert!(matches!(
            area_and_tmc(&open, &[0.1]),
            Err(Error::Domain { .. })
        ));
    }
}
