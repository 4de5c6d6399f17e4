//! Closed-form patches shared by the diagnostics unit tests.

use nalgebra::Vector3;

use crate::surface::{PatchOrigin, SurfacePatch};

/// Unit sphere band in coordinates conformal for both fundamental
/// forms: `(sech v cos u, sech v sin u, tanh v)` with the inward
/// normal, so the second form is positive definite (`<X_u, N_u> < 0`).
pub(crate) fn sphere_band(u_count: usize, v_lo: f64, v_hi: f64, v_count: usize) -> SurfacePatch {
    let us: Vec<f64> = (0..u_count)
        .map(|i| std::f64::consts::TAU * i as f64 / u_count as f64)
        .collect();
    let vs: Vec<f64> = (0..v_count)
        .map(|j| v_lo + (v_hi - v_lo) * j as f64 / (v_count - 1) as f64)
        .collect();
    let mut patch = SurfacePatch::zeroed(
        us.clone(),
        vs.clone(),
        PatchOrigin::RotationalExact,
        true,
        true,
    );
    for (i, &u) in us.iter().enumerate() {
        let (su, cu) = u.sin_cos();
        for (j, &v) in vs.iter().enumerate() {
            let at = patch.idx(i, j);
            let s = 1.0 / v.cosh();
            let t = v.tanh();
            let sp = -s * t;
            let spp = s * (t * t - s * s);

            patch.x[at] = Vector3::new(s * cu, s * su, t);
            patch.x_u[at] = Vector3::new(-s * su, s * cu, 0.0);
            patch.x_v[at] = Vector3::new(sp * cu, sp * su, s * s);
            patch.x_uu[at] = Vector3::new(-s * cu, -s * su, 0.0);
            patch.x_uv[at] = Vector3::new(-sp * su, sp * cu, 0.0);
            patch.x_vv[at] = Vector3::new(spp * cu, spp * su, 2.0 * s * sp);

            patch.n[at] = -patch.x[at];
            patch.n_u[at] = -patch.x_u[at];
            patch.n_v[at] = -patch.x_v[at];
            patch.n_uu[at] = -patch.x_uu[at];
            patch.n_uv[at] = -patch.x_uv[at];
            patch.n_vv[at] = -patch.x_vv[at];
        }
    }
    patch
}
