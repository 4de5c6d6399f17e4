//! Exact rotationally symmetric models: the one-parameter family of
//! peaked spheres, their conformal strip coordinates, and closed-form
//! patches in both parametrizations.
//!
//! The family is indexed by an amplitude `A` in (0, 1]: the profile is
//! `f(u) = A cos u` with height `h(u) = integral of sqrt(1 - A^2 sin^2 r)`.
//! At `A = 1` it closes into the round sphere; for `A < 1` the two poles
//! become conical points and the total turning of the limit parallel
//! drops below a full turn.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::quad;
use crate::tol;

use super::{PatchOrigin, SurfacePatch};

/// Profile jets of the peaked sphere at one latitude: the radius
/// `f = A cos u`, the height integrand `h' = sqrt(1 - A^2 sin^2 u)`,
/// and their derivatives up to the orders the patch 2-jets need.
#[derive(Debug, Clone, Copy)]
struct Profile {
    f: f64,
    fp: f64,
    fpp: f64,
    hp: f64,
    hpp: f64,
    hppp: f64,
}

fn profile(a: f64, u: f64) -> Profile {
    let (su, cu) = u.sin_cos();
    let f = a * cu;
    let fp = -a * su;
    let fpp = -a * cu;
    // g = h'^2 = 1 - A^2 sin^2 u; differentiate through the square root.
    let g = 1.0 - a * a * su * su;
    let gp = -2.0 * a * a * su * cu;
    let gpp = -2.0 * a * a * (cu * cu - su * su);
    let hp = g.sqrt();
    let hpp = gp / (2.0 * hp);
    let hppp = (gpp - 2.0 * hpp * hpp) / (2.0 * hp);
    Profile {
        f,
        fp,
        fpp,
        hp,
        hpp,
        hppp,
    }
}

fn height_integrand(a: f64) -> impl Fn(f64) -> f64 {
    move |u: f64| {
        let su = u.sin();
        (1.0 - a * a * su * su).sqrt()
    }
}

/// Complete height integral `E(A)`: the height climbed from the equator
/// to a pole. The pole-to-pole distance (diameter) is twice this.
pub fn pole_height(a: f64) -> Result<f64> {
    check_amplitude(a, true)?;
    Ok(quad::integrate(
        &height_integrand(a),
        0.0,
        FRAC_PI_2,
        tol::QUADRATURE_ABS_TOL,
    ))
}

/// Distance between the two singular points of the peaked sphere.
pub fn peaked_sphere_diameter(a: f64) -> Result<f64> {
    Ok(2.0 * pole_height(a)?)
}

fn check_amplitude(a: f64, allow_one: bool) -> Result<()> {
    let ok = a > 0.0 && (a < 1.0 || (allow_one && a == 1.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            reason: format!(
                "amplitude must lie in (0, 1{}), got {a}",
                if allow_one { "]" } else { ")" }
            ),
        })
    }
}

/// Sample the peaked sphere of amplitude `a` on its natural latitude x
/// longitude grid: `X(u, v) = (f(u) cos v, f(u) sin v, h(u))` with the
/// profile parameter `u` restricted to an interval strictly inside
/// (-pi/2, pi/2) and `v` running over a full turn.
///
/// The unit normal is `N = (-h' cos v, -h' sin v, f')`, oriented so that
/// the second fundamental form is positive definite.
pub fn rotational_peaked_sphere(
    a: f64,
    u_range: (f64, f64),
    u_count: usize,
    v_count: usize,
) -> Result<SurfacePatch> {
    check_amplitude(a, true)?;
    let (u_lo, u_hi) = u_range;
    if !(u_lo < u_hi) || u_lo <= -FRAC_PI_2 || u_hi >= FRAC_PI_2 {
        return Err(Error::Domain {
            reason: format!(
                "latitude range [{u_lo}, {u_hi}] must sit strictly inside (-pi/2, pi/2)"
            ),
        });
    }
    if u_count < 2 || v_count < 2 {
        return Err(Error::Domain {
            reason: format!("grid {u_count} x {v_count} is too small"),
        });
    }

    let us: Vec<f64> = (0..u_count)
        .map(|i| u_lo + (u_hi - u_lo) * i as f64 / (u_count - 1) as f64)
        .collect();
    let vs: Vec<f64> = (0..v_count)
        .map(|j| std::f64::consts::TAU * j as f64 / v_count as f64)
        .collect();

    // Heights along the profile, anchored at h(0) = 0.
    let integrand = height_integrand(a);
    let offsets = quad::cumulative(&integrand, &us, tol::QUADRATURE_ABS_TOL);
    let h0 = quad::integrate(&integrand, 0.0, us[0], tol::QUADRATURE_ABS_TOL);
    let hs: Vec<f64> = offsets.iter().map(|d| h0 + d).collect();

    // In this parametrization u is the profile coordinate and v the
    // rotation angle, so the patch is periodic in v, not u. The flag
    // refers to the patch's own first coordinate.
    let mut patch = SurfacePatch::zeroed(us.clone(), vs.clone(), PatchOrigin::RotationalExact, false, false);
    for (i, &u) in us.iter().enumerate() {
        let pr = profile(a, u);
        let h = hs[i];
        for (j, &v) in vs.iter().enumerate() {
            let (sv, cv) = v.sin_cos();
            let at = patch.idx(i, j);
            patch.x[at] = Vector3::new(pr.f * cv, pr.f * sv, h);
            patch.x_u[at] = Vector3::new(pr.fp * cv, pr.fp * sv, pr.hp);
            patch.x_v[at] = Vector3::new(-pr.f * sv, pr.f * cv, 0.0);
            patch.x_uu[at] = Vector3::new(pr.fpp * cv, pr.fpp * sv, pr.hpp);
            patch.x_uv[at] = Vector3::new(-pr.fp * sv, pr.fp * cv, 0.0);
            patch.x_vv[at] = Vector3::new(-pr.f * cv, -pr.f * sv, 0.0);
            patch.n[at] = Vector3::new(-pr.hp * cv, -pr.hp * sv, pr.fp);
            patch.n_u[at] = Vector3::new(-pr.hpp * cv, -pr.hpp * sv, pr.fpp);
            patch.n_v[at] = Vector3::new(pr.hp * sv, -pr.hp * cv, 0.0);
            patch.n_uu[at] = Vector3::new(-pr.hppp * cv, -pr.hppp * sv, -pr.fp);
            patch.n_uv[at] = Vector3::new(pr.hpp * sv, -pr.hpp * cv, 0.0);
            patch.n_vv[at] = Vector3::new(pr.hp * cv, pr.hp * sv, 0.0);
        }
    }
    Ok(patch)
}

/// Conformal structure of the peaked sphere: the latitude-to-abscissa
/// map `s(u)`, the half-width `a_conf = s(pi/2)` of the conformal strip,
/// and the modulus `exp(2 a_conf)` of the associated annulus.
#[derive(Debug, Clone, Copy)]
pub struct ConformalStructure {
    amplitude: f64,
    half_width: f64,
    modulus: f64,
}

impl ConformalStructure {
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Half-width of the conformal strip (a complete elliptic integral
    /// of the first kind in the amplitude).
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Modulus of the annulus the strip wraps into.
    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// Conformal abscissa of latitude `u` (odd, strictly increasing).
    pub fn s_of_u(&self, u: f64) -> Result<f64> {
        if u.abs() > FRAC_PI_2 {
            return Err(Error::Domain {
                reason: format!("latitude {u} outside [-pi/2, pi/2]"),
            });
        }
        let a = self.amplitude;
        let integrand = move |r: f64| {
            let sr = r.sin();
            1.0 / (1.0 - a * a * sr * sr).sqrt()
        };
        Ok(quad::integrate(
            &integrand,
            0.0,
            u,
            tol::QUADRATURE_ABS_TOL,
        ))
    }

    /// Invert the abscissa map by monotone bisection.
    pub fn u_of_s(&self, s: f64) -> Result<f64> {
        if s.abs() > self.half_width {
            return Err(Error::Domain {
                reason: format!(
                    "abscissa {s} outside the strip [-{0}, {0}]",
                    self.half_width
                ),
            });
        }
        let mut lo = -FRAC_PI_2;
        let mut hi = FRAC_PI_2;
        while hi - lo > tol::BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if self.s_of_u(mid)? < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Conformal data of the peaked sphere of amplitude `a` in (0, 1).
///
/// At `a = 1` the abscissa integral diverges (the strip becomes the
/// whole plane), which is reported rather than approximated.
pub fn rotational_conformal(a: f64) -> Result<ConformalStructure> {
    if a == 1.0 {
        return Err(Error::DivergentIntegral {
            reason: "conformal strip of the round sphere has infinite width".into(),
        });
    }
    check_amplitude(a, false)?;
    let integrand = move |r: f64| {
        let sr = r.sin();
        1.0 / (1.0 - a * a * sr * sr).sqrt()
    };
    let half_width = quad::integrate(&integrand, 0.0, FRAC_PI_2, tol::QUADRATURE_ABS_TOL);
    Ok(ConformalStructure {
        amplitude: a,
        half_width,
        modulus: (2.0 * half_width).exp(),
    })
}

/// Closed-form sample of the peaked sphere in the strip coordinates of
/// the singular-curve construction: `u` is the angle around the axis,
/// `v` the conformal distance from the cone point at `X(u, 0) = p`.
///
/// Writing `w(v)` for the latitude with conformal abscissa `v - a_conf`
/// (continued analytically through the pole for `v < 0`), the patch is
///
/// ```text
/// X(u, v) = p + (f(w) cos u, f(w) sin u, -h(w) - E)
/// N(u, v) = (h'(w) cos u, h'(w) sin u, -A sin w)
/// ```
///
/// which satisfies `X_u = N x N_v`, `X_v = -N x N_u` identically and is
/// conformal for the second fundamental form. It is the exact solution
/// that the series pipeline must reproduce for circle data.
pub fn rotational_strip_patch(
    a: f64,
    p: Vector3<f64>,
    u_count: usize,
    v_range: (f64, f64),
    v_count: usize,
) -> Result<SurfacePatch> {
    let conf = rotational_conformal(a)?;
    let (v_lo, v_hi) = v_range;
    let width = 2.0 * conf.half_width();
    if !(v_lo < v_hi) || v_lo <= -width || v_hi >= width {
        return Err(Error::Domain {
            reason: format!(
                "strip range [{v_lo}, {v_hi}] must sit strictly inside (-{width}, {width})"
            ),
        });
    }
    if u_count < 2 || v_count < 2 {
        return Err(Error::Domain {
            reason: format!("grid {u_count} x {v_count} is too small"),
        });
    }

    let us: Vec<f64> = (0..u_count)
        .map(|i| std::f64::consts::TAU * i as f64 / u_count as f64)
        .collect();
    let vs: Vec<f64> = (0..v_count)
        .map(|j| v_lo + (v_hi - v_lo) * j as f64 / (v_count - 1) as f64)
        .collect();

    let pole = pole_height(a)?;
    let integrand = height_integrand(a);

    // Latitude, profile jet, and height at each strip ordinate. For
    // v < 0 the latitude continues through the cone point along the
    // point-reflected sheet: w(-v) = -pi - w(v).
    struct Row {
        pr: Profile,
        sw: f64,
        cw: f64,
        z: f64,
    }
    let rows: Vec<Row> = vs
        .iter()
        .map(|&v| -> Result<Row> {
            let w = if v >= 0.0 {
                conf.u_of_s(v - conf.half_width())?
            } else {
                -std::f64::consts::PI - conf.u_of_s(-v - conf.half_width())?
            };
            let pr = profile(a, w);
            let h = quad::integrate(&integrand, 0.0, w, tol::QUADRATURE_ABS_TOL);
            Ok(Row {
                pr,
                sw: w.sin(),
                cw: w.cos(),
                z: -(h + pole),
            })
        })
        .collect::<Result<_>>()?;

    let mut patch = SurfacePatch::zeroed(us.clone(), vs.clone(), PatchOrigin::RotationalExact, true, true);
    for (i, &u) in us.iter().enumerate() {
        let (su, cu) = u.sin_cos();
        for (j, row) in rows.iter().enumerate() {
            let Profile {
                f,
                fp,
                fpp,
                hp,
                hpp,
                hppp,
            } = row.pr;
            let at = patch.idx(i, j);
            patch.x[at] = p + Vector3::new(f * cu, f * su, row.z);
            patch.x_u[at] = Vector3::new(-f * su, f * cu, 0.0);
            patch.x_v[at] = Vector3::new(fp * cu, fp * su, -hp) * hp;
            patch.x_uu[at] = Vector3::new(-f * cu, -f * su, 0.0);
            patch.x_uv[at] = Vector3::new(-fp * su, fp * cu, 0.0) * hp;
            patch.x_vv[at] = Vector3::new(fp * cu, fp * su, -hp) * (hp * hpp)
                + Vector3::new(fpp * cu, fpp * su, -hpp) * (hp * hp);
            patch.n[at] = Vector3::new(hp * cu, hp * su, -a * row.sw);
            patch.n_u[at] = Vector3::new(-hp * su, hp * cu, 0.0);
            patch.n_v[at] = Vector3::new(hpp * cu, hpp * su, -a * row.cw) * hp;
            patch.n_uu[at] = Vector3::new(-hp * cu, -hp * su, 0.0);
            patch.n_uv[at] = Vector3::new(-hpp * su, hpp * cu, 0.0) * hp;
            patch.n_vv[at] = Vector3::new(hpp * cu, hpp * su, -a * row.cw) * (hp * hpp)
                + Vector3::new(hppp * cu, hppp * su, a * row.sw) * (hp * hp);
        }
    }
    Ok(patch)
}

/// Two candidate closed forms for the geodesic curvature of the limit
/// parallel of the peaked sphere at its cone point.
///
/// The first, `A / sqrt(1 - A^2)`, is the one the total-turning balance
/// for small circuits around the cone point forces; the second,
/// `sqrt((2 - A^2) / (1 - A^2))`, arises from a different normalization
/// of the same limit. They disagree for every amplitude, so both are
/// reported side by side and downstream consumers state which one they
/// use.
pub fn limit_circle_curvature_candidates(a: f64) -> Result<(f64, f64)> {
    check_amplitude(a, false)?;
    let r2 = 1.0 - a * a;
    Ok(((a * a / r2).sqrt(), ((2.0 - a * a) / r2).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn amplitude_one_is_the_round_sphere() {
        let patch = rotational_peaked_sphere(1.0, (-1.2, 1.2), 9, 12).unwrap();
        for at in 0..patch.len() {
            assert_abs_diff_eq!(patch.x[at].norm(), 1.0, epsilon = 1e-11);
            assert_abs_diff_eq!((patch.n[at] + patch.x[at]).norm(), 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn peaked_sphere_has_unit_curvature_and_frontal_normal() {
        let patch = rotational_peaked_sphere(0.6, (-1.4, 1.4), 11, 16).unwrap();
        for at in 0..patch.len() {
            let (xu, xv, n) = (patch.x_u[at], patch.x_v[at], patch.n[at]);
            assert_abs_diff_eq!(n.norm(), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(xu.dot(&n), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(xv.dot(&n), 0.0, epsilon = 1e-14);
            let e = patch.x_uu[at].dot(&n);
            let ff = patch.x_uv[at].dot(&n);
            let g = patch.x_vv[at].dot(&n);
            let det_i = xu.norm_squared() * xv.norm_squared() - xu.dot(&xv).powi(2);
            let k = (e * g - ff * ff) / det_i;
            assert_abs_diff_eq!(k, 1.0, epsilon = 1e-12);
            // Positive definite second fundamental form.
            assert!(e > 0.0 && e * g - ff * ff > 0.0);
        }
    }

    #[test]
    fn normal_derivatives_match_finite_differences() {
        let a = 0.7;
        let eps = 1e-5;
        let probe = |u: f64, v: f64| {
            let pr = profile(a, u);
            let (sv, cv) = v.sin_cos();
            Vector3::new(-pr.hp * cv, -pr.hp * sv, pr.fp)
        };
        let patch = rotational_peaked_sphere(a, (0.3, 0.9), 4, 8).unwrap();
        let (i, j) = (2, 3);
        let (u, v) = (patch.us[i], patch.vs[j]);
        let at = patch.idx(i, j);
        let fd_u = (probe(u + eps, v) - probe(u - eps, v)) / (2.0 * eps);
        let fd_v = (probe(u, v + eps) - probe(u, v - eps)) / (2.0 * eps);
        assert!((fd_u - patch.n_u[at]).norm() < 1e-9);
        assert!((fd_v - patch.n_v[at]).norm() < 1e-9);
        let fd_uu = (probe(u + eps, v) - probe(u, v) * 2.0 + probe(u - eps, v)) / (eps * eps);
        let fd_vv = (probe(u, v + eps) - probe(u, v) * 2.0 + probe(u, v - eps)) / (eps * eps);
        assert!((fd_uu - patch.n_uu[at]).norm() < 1e-5);
        assert!((fd_vv - patch.n_vv[at]).norm() < 1e-5);
    }

    #[test]
    fn diameter_matches_the_complete_height_integral() {
        // E(0.5) = 1.4674622093394272 via the arithmetic-geometric mean.
        assert_abs_diff_eq!(
            peaked_sphere_diameter(0.5).unwrap(),
            2.9349244186788544,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(peaked_sphere_diameter(1.0).unwrap(), 2.0, epsilon = 1e-11);
    }

    #[test]
    fn conformal_half_width_is_the_complete_first_kind_integral() {
        let conf = rotational_conformal(0.5).unwrap();
        assert_abs_diff_eq!(conf.half_width(), 1.6857503548125961, epsilon = 1e-9);
        assert_abs_diff_eq!(
            conf.modulus(),
            (2.0 * conf.half_width()).exp(),
            epsilon = 0.0
        );
        assert!(matches!(
            rotational_conformal(1.0),
            Err(Error::DivergentIntegral { .. })
        ));
    }

    #[test]
    fn abscissa_map_is_odd_and_invertible() {
        let conf = rotational_conformal(0.5).unwrap();
        let s = conf.s_of_u(0.7).unwrap();
        assert_abs_diff_eq!(conf.s_of_u(-0.7).unwrap(), -s, epsilon = 1e-12);
        assert_abs_diff_eq!(conf.u_of_s(s).unwrap(), 0.7, epsilon = 1e-10);
        assert_abs_diff_eq!(
            conf.s_of_u(FRAC_PI_2).unwrap(),
            conf.half_width(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn strip_patch_solves_the_representation_formula() {
        let p = Vector3::new(0.1, -0.2, 0.45);
        let patch = rotational_strip_patch(0.5, p, 12, (-0.8, 0.8), 9).unwrap();
        assert!(patch.ii_conformal);
        for at in 0..patch.len() {
            let (n, nu, nv) = (patch.n[at], patch.n_u[at], patch.n_v[at]);
            assert_abs_diff_eq!(n.norm(), 1.0, epsilon = 1e-12);
            assert!((patch.x_u[at] - n.cross(&nv)).norm() < 1e-12);
            assert!((patch.x_v[at] + n.cross(&nu)).norm() < 1e-12);
            // Conformal for the second fundamental form.
            assert_abs_diff_eq!(
                patch.x_u[at].dot(&nu),
                patch.x_v[at].dot(&nv),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(patch.x_u[at].dot(&nv), 0.0, epsilon = 1e-12);
        }
        // Middle row of the symmetric grid is the cone point itself.
        for i in 0..patch.u_count() {
            assert!((patch.x[patch.idx(i, 4)] - p).norm() < 1e-12);
            assert!(patch.x_u[patch.idx(i, 4)].norm() < 1e-12);
        }
    }

    #[test]
    fn strip_patch_rejects_out_of_strip_ranges() {
        let conf = rotational_conformal(0.5).unwrap();
        let too_wide = 2.0 * conf.half_width() + 0.1;
        assert!(matches!(
            rotational_strip_patch(0.5, Vector3::zeros(), 8, (0.0, too_wide), 5),
            Err(Error::Domain { .. })
        ));
    }
}
