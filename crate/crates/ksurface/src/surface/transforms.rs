//! Pointwise transforms of sampled patches: the two parallel surfaces
//! at unit distance (which have constant mean curvature when the source
//! has constant curvature one) and the contact-geometry dual obtained
//! by trading the graph of a surface for the graph of its support data.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::tol;

use super::{PatchOrigin, SurfacePatch};

/// Direction of the unit normal shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmcSign {
    Plus,
    Minus,
}

impl CmcSign {
    pub fn value(&self) -> f64 {
        match self {
            CmcSign::Plus => 1.0,
            CmcSign::Minus => -1.0,
        }
    }
}

/// Shift every sample one unit along the normal: `X -> X + sign * N`,
/// with the Gauss map unchanged.
///
/// Where a principal curvature of the source equals `sign`, the shifted
/// immersion degenerates; such samples are flagged as singular rather
/// than rejected, because the construction is still pointwise defined.
pub fn parallel_cmc(patch: &SurfacePatch, sign: CmcSign) -> SurfacePatch {
    let s = sign.value();
    let mut out = patch.clone();
    out.origin = PatchOrigin::ParallelCmc;
    // The shifted coordinates are generally no longer conformal for the
    // image's second fundamental form.
    out.ii_conformal = false;
    for at in 0..patch.len() {
        out.x[at] = patch.x[at] + patch.n[at] * s;
        out.x_u[at] = patch.x_u[at] + patch.n_u[at] * s;
        out.x_v[at] = patch.x_v[at] + patch.n_v[at] * s;
        out.x_uu[at] = patch.x_uu[at] + patch.n_uu[at] * s;
        out.x_uv[at] = patch.x_uv[at] + patch.n_uv[at] * s;
        out.x_vv[at] = patch.x_vv[at] + patch.n_vv[at] * s;
        let area = out.x_u[at].cross(&out.x_v[at]).norm();
        let scale = 1.0 + patch.x_u[at].cross(&patch.x_v[at]).norm();
        out.singular[at] = patch.singular[at] || area <= tol::PARALLEL_DEGENERACY * scale;
    }
    out
}

/// Scalar with its partial derivatives up to second order; the algebra
/// below pushes 2-jets through products, quotients and square roots so
/// the dual patch keeps exact derivative data.
#[derive(Debug, Clone, Copy, Default)]
struct ScalarJet {
    q: f64,
    qu: f64,
    qv: f64,
    quu: f64,
    quv: f64,
    qvv: f64,
}

impl ScalarJet {
    fn constant(c: f64) -> Self {
        ScalarJet {
            q: c,
            ..Default::default()
        }
    }

    fn add(&self, o: &Self) -> Self {
        ScalarJet {
            q: self.q + o.q,
            qu: self.qu + o.qu,
            qv: self.qv + o.qv,
            quu: self.quu + o.quu,
            quv: self.quv + o.quv,
            qvv: self.qvv + o.qvv,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        ScalarJet {
            q: self.q - o.q,
            qu: self.qu - o.qu,
            qv: self.qv - o.qv,
            quu: self.quu - o.quu,
            quv: self.quv - o.quv,
            qvv: self.qvv - o.qvv,
        }
    }

    fn neg(&self) -> Self {
        ScalarJet::constant(0.0).sub(self)
    }

    fn mul(&self, o: &Self) -> Self {
        ScalarJet {
            q: self.q * o.q,
            qu: self.qu * o.q + self.q * o.qu,
            qv: self.qv * o.q + self.q * o.qv,
            quu: self.quu * o.q + 2.0 * self.qu * o.qu + self.q * o.quu,
            quv: self.quv * o.q + self.qu * o.qv + self.qv * o.qu + self.q * o.quv,
            qvv: self.qvv * o.q + 2.0 * self.qv * o.qv + self.q * o.qvv,
        }
    }

    /// Quotient rule in the recursive form d*(n/d)'' = n'' - ...,
    /// which avoids powers of the denominator.
    fn div(&self, o: &Self) -> Self {
        let q = self.q / o.q;
        let qu = (self.qu - q * o.qu) / o.q;
        let qv = (self.qv - q * o.qv) / o.q;
        ScalarJet {
            q,
            qu,
            qv,
            quu: (self.quu - 2.0 * qu * o.qu - q * o.quu) / o.q,
            quv: (self.quv - qu * o.qv - qv * o.qu - q * o.quv) / o.q,
            qvv: (self.qvv - 2.0 * qv * o.qv - q * o.qvv) / o.q,
        }
    }

    fn sqrt(&self) -> Self {
        let q = self.q.sqrt();
        let qu = self.qu / (2.0 * q);
        let qv = self.qv / (2.0 * q);
        ScalarJet {
            q,
            qu,
            qv,
            quu: (self.quu - 2.0 * qu * qu) / (2.0 * q),
            quv: (self.quv - 2.0 * qu * qv) / (2.0 * q),
            qvv: (self.qvv - 2.0 * qv * qv) / (2.0 * q),
        }
    }
}

fn component(
    patch: &SurfacePatch,
    field: impl Fn(&SurfacePatch) -> &Vec<Vector3<f64>>,
    at: usize,
    c: usize,
) -> f64 {
    field(patch)[at][c]
}

fn scalar_jet(patch: &SurfacePatch, at: usize, of_x: bool, c: usize) -> ScalarJet {
    if of_x {
        ScalarJet {
            q: component(patch, |p| &p.x, at, c),
            qu: component(patch, |p| &p.x_u, at, c),
            qv: component(patch, |p| &p.x_v, at, c),
            quu: component(patch, |p| &p.x_uu, at, c),
            quv: component(patch, |p| &p.x_uv, at, c),
            qvv: component(patch, |p| &p.x_vv, at, c),
        }
    } else {
        ScalarJet {
            q: component(patch, |p| &p.n, at, c),
            qu: component(patch, |p| &p.n_u, at, c),
            qv: component(patch, |p| &p.n_v, at, c),
            quu: component(patch, |p| &p.n_uu, at, c),
            quv: component(patch, |p| &p.n_uv, at, c),
            qvv: component(patch, |p| &p.n_vv, at, c),
        }
    }
}

/// Contact dual of a patch presented over the horizontal plane:
///
/// ```text
/// L = (-N1/N3, -N2/N3, -(X1 N1 + X2 N2)/N3 - X3)
/// ```
///
/// with new unit normal `(-X1, -X2, 1) / sqrt(1 + X1^2 + X2^2)`. For a
/// graph `z = phi(x, y)` this is the classical transform
/// `(x, y, phi) -> (phi_x, phi_y, x phi_x + y phi_y - phi)`.
///
/// Requires the Gauss map to stay away from the horizon: samples with
/// `|N3|` at or below the floor make the quotients meaningless and the
/// whole transform is refused.
pub fn legendre_transform(patch: &SurfacePatch) -> Result<SurfacePatch> {
    let mut min_n3 = f64::INFINITY;
    let mut count = 0usize;
    for n in &patch.n {
        let a = n.z.abs();
        min_n3 = min_n3.min(a);
        if a <= tol::HORIZON_FLOOR {
            count += 1;
        }
    }
    if count > 0 {
        return Err(Error::Horizon { count, min_n3 });
    }

    let mut out = SurfacePatch::zeroed(
        patch.us.clone(),
        patch.vs.clone(),
        PatchOrigin::Legendre,
        false,
        patch.u_periodic,
    );
    out.singular = patch.singular.clone();

    let one = ScalarJet::constant(1.0);
    for at in 0..patch.len() {
        let x1 = scalar_jet(patch, at, true, 0);
        let x2 = scalar_jet(patch, at, true, 1);
        let x3 = scalar_jet(patch, at, true, 2);
        let n1 = scalar_jet(patch, at, false, 0);
        let n2 = scalar_jet(patch, at, false, 1);
        let n3 = scalar_jet(patch, at, false, 2);

        let l1 = n1.div(&n3).neg();
        let l2 = n2.div(&n3).neg();
        let l3 = x1.mul(&n1).add(&x2.mul(&n2)).div(&n3).neg().sub(&x3);

        let w = one.add(&x1.mul(&x1)).add(&x2.mul(&x2)).sqrt();
        let m1 = x1.neg().div(&w);
        let m2 = x2.neg().div(&w);
        let m3 = one.div(&w);

        let store = |f: &mut Vec<Vector3<f64>>, pick: fn(&ScalarJet) -> f64| {
            f[at] = Vector3::new(pick(&l1), pick(&l2), pick(&l3));
        };
        store(&mut out.x, |j| j.q);
        store(&mut out.x_u, |j| j.qu);
        store(&mut out.x_v, |j| j.qv);
        store(&mut out.x_uu, |j| j.quu);
        store(&mut out.x_uv, |j| j.quv);
        store(&mut out.x_vv, |j| j.qvv);
        let store_n = |f: &mut Vec<Vector3<f64>>, pick: fn(&ScalarJet) -> f64| {
            f[at] = Vector3::new(pick(&m1), pick(&m2), pick(&m3));
        };
        store_n(&mut out.n, |j| j.q);
        store_n(&mut out.n_u, |j| j.qu);
        store_n(&mut out.n_v, |j| j.qv);
        store_n(&mut out.n_uu, |j| j.quu);
        store_n(&mut out.n_uv, |j| j.quv);
        store_n(&mut out.n_vv, |j| j.qvv);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::rotational::rotational_peaked_sphere;
    use approx::assert_abs_diff_eq;

    /// Mean curvature from the sampled 2-jet in arbitrary coordinates.
    fn mean_curvature(p: &SurfacePatch, at: usize) -> f64 {
        let (xu, xv, n) = (p.x_u[at], p.x_v[at], p.n[at]);
        let (ee, ff, gg) = (xu.dot(&xu), xu.dot(&xv), xv.dot(&xv));
        let (l, m, q) = (
            p.x_uu[at].dot(&n),
            p.x_uv[at].dot(&n),
            p.x_vv[at].dot(&n),
        );
        (l * gg - 2.0 * m * ff + q * ee) / (2.0 * (ee * gg - ff * ff))
    }

    fn gauss_curvature(p: &SurfacePatch, at: usize) -> f64 {
        let (xu, xv, n) = (p.x_u[at], p.x_v[at], p.n[at]);
        let det_i = xu.norm_squared() * xv.norm_squared() - xu.dot(&xv).powi(2);
        let (l, m, q) = (
            p.x_uu[at].dot(&n),
            p.x_uv[at].dot(&n),
            p.x_vv[at].dot(&n),
        );
        (l * q - m * m) / det_i
    }

    fn plane_patch(height: f64) -> SurfacePatch {
        let us: Vec<f64> = (0..5).map(|i| -0.4 + 0.2 * i as f64).collect();
        let vs: Vec<f64> = (0..4).map(|j| -0.3 + 0.2 * j as f64).collect();
        let mut p = SurfacePatch::zeroed(
            us.clone(),
            vs.clone(),
            super::super::PatchOrigin::RotationalExact,
            false,
            false,
        );
        for (i, &u) in us.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate() {
                let at = p.idx(i, j);
                p.x[at] = Vector3::new(u, v, height);
                p.x_u[at] = Vector3::new(1.0, 0.0, 0.0);
                p.x_v[at] = Vector3::new(0.0, 1.0, 0.0);
                p.n[at] = Vector3::new(0.0, 0.0, 1.0);
            }
        }
        p
    }

    fn paraboloid_patch() -> SurfacePatch {
        let us: Vec<f64> = (0..6).map(|i| -0.5 + 0.2 * i as f64).collect();
        let vs: Vec<f64> = (0..6).map(|j| -0.5 + 0.2 * j as f64).collect();
        let mut p = SurfacePatch::zeroed(
            us.clone(),
            vs.clone(),
            super::super::PatchOrigin::RotationalExact,
            false,
            false,
        );
        for (i, &u) in us.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate() {
                let at = p.idx(i, j);
                let w = (1.0 + u * u + v * v).sqrt();
                p.x[at] = Vector3::new(u, v, 0.5 * (u * u + v * v));
                p.x_u[at] = Vector3::new(1.0, 0.0, u);
                p.x_v[at] = Vector3::new(0.0, 1.0, v);
                p.x_uu[at] = Vector3::new(0.0, 0.0, 1.0);
                p.x_vv[at] = Vector3::new(0.0, 0.0, 1.0);
                p.n[at] = Vector3::new(-u, -v, 1.0) / w;
                // Jets of N = (-u, -v, 1)/w by direct differentiation.
                let wu = u / w;
                let wv = v / w;
                p.n_u[at] = Vector3::new(-1.0, 0.0, 0.0) / w
                    - Vector3::new(-u, -v, 1.0) * (wu / (w * w));
                p.n_v[at] = Vector3::new(0.0, -1.0, 0.0) / w
                    - Vector3::new(-u, -v, 1.0) * (wv / (w * w));
                // Second derivatives left at finite-difference accuracy
                // for this test: the dual's value and first-jet checks
                // do not consume them.
            }
        }
        p
    }

    #[test]
    fn parallels_of_a_curvature_one_surface_have_constant_mean_curvature() {
        let patch = rotational_peaked_sphere(0.8, (-1.2, 1.2), 9, 12).unwrap();
        for sign in [CmcSign::Plus, CmcSign::Minus] {
            let par = parallel_cmc(&patch, sign);
            assert_eq!(par.origin, PatchOrigin::ParallelCmc);
            for at in 0..par.len() {
                assert!(!par.singular[at]);
                // H = -sign/2 with the normal kept from the source.
                assert_abs_diff_eq!(
                    mean_curvature(&par, at),
                    -0.5 * sign.value(),
                    epsilon = 1e-10
                );
                assert!((gauss_curvature(&par, at) - 1.0).abs() > 0.01);
            }
        }
    }

    #[test]
    fn opposite_shifts_compose_to_the_identity() {
        let patch = rotational_peaked_sphere(0.8, (-1.0, 1.0), 7, 9).unwrap();
        let back = parallel_cmc(&parallel_cmc(&patch, CmcSign::Plus), CmcSign::Minus);
        for at in 0..patch.len() {
            assert!((back.x[at] - patch.x[at]).norm() < 1e-14);
            assert!((back.x_uv[at] - patch.x_uv[at]).norm() < 1e-14);
            assert_eq!(back.n[at], patch.n[at]);
        }
    }

    #[test]
    fn inner_parallel_of_the_round_sphere_collapses_and_is_flagged() {
        let patch = rotational_peaked_sphere(1.0, (-1.0, 1.0), 7, 9).unwrap();
        // The normal points inward, so the Plus shift hits the center.
        let par = parallel_cmc(&patch, CmcSign::Plus);
        for at in 0..par.len() {
            assert!(par.x[at].norm() < 1e-10);
            assert!(par.singular[at]);
        }
    }

    #[test]
    fn dual_of_a_horizontal_plane_is_a_single_point() {
        let dual = legendre_transform(&plane_patch(0.7)).unwrap();
        assert_eq!(dual.origin, PatchOrigin::Legendre);
        for at in 0..dual.len() {
            assert!((dual.x[at] - Vector3::new(0.0, 0.0, -0.7)).norm() < 1e-15);
            assert_eq!(dual.x_u[at].norm(), 0.0);
            assert_eq!(dual.x_v[at].norm(), 0.0);
        }
    }

    #[test]
    fn paraboloid_is_self_dual() {
        let dual = legendre_transform(&paraboloid_patch()).unwrap();
        for (at, x) in dual.x.iter().enumerate() {
            // Image point lies on the same paraboloid, at (u, v) itself.
            assert_abs_diff_eq!(x.z, 0.5 * (x.x * x.x + x.y * x.y), epsilon = 1e-13);
            let us_len = dual.vs.len();
            let (i, j) = (at / us_len, at % us_len);
            assert_abs_diff_eq!(x.x, dual.us[i], epsilon = 1e-13);
            assert_abs_diff_eq!(x.y, dual.vs[j], epsilon = 1e-13);
            // First jet of the dual graph: d/du (u, v, (u^2+v^2)/2).
            assert!((dual.x_u[at] - Vector3::new(1.0, 0.0, x.x)).norm() < 1e-12);
            assert!((dual.x_v[at] - Vector3::new(0.0, 1.0, x.y)).norm() < 1e-12);
            // The new normal is the upward graph normal at the image.
            let w = (1.0 + x.x * x.x + x.y * x.y).sqrt();
            let expect = Vector3::new(-x.x, -x.y, 1.0) / w;
            assert!((dual.n[at] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn dual_of_a_sphere_band_lies_on_the_unit_hyperboloid() {
        let patch = rotational_peaked_sphere(1.0, (0.4, 1.2), 7, 9).unwrap();
        let dual = legendre_transform(&patch).unwrap();
        for x in &dual.x {
            assert_abs_diff_eq!(
                x.z * x.z - x.x * x.x - x.y * x.y,
                1.0,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn horizon_crossing_is_refused() {
        let patch = rotational_peaked_sphere(1.0, (-0.5, 0.5), 5, 8).unwrap();
        match legendre_transform(&patch) {
            Err(Error::Horizon { count, min_n3 }) => {
                assert!(count >= 1);
                assert!(min_n3 <= 1e-12);
            }
            other => panic!("expected a horizon refusal, got {other:?}"),
        }
    }
}
