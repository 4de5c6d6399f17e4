//! Harmonic extension of the spherical datum into a strip.
//!
//! The Gauss map of the surface is a harmonic map `N` from a strip
//! `S^1 x (-delta, delta)` into the unit sphere, solving
//! `N_uu + N_vv + (|N_u|^2 + |N_v|^2) N = 0` with Cauchy data
//! `N(u, 0) = alpha(u)` and `N_v(u, 0) = 0`. Because the datum is
//! analytic, the solution is a convergent power series in `v`; this
//! module builds its Taylor layers by an explicit recurrence, estimates
//! the height of the strip on which the truncated series is trustworthy,
//! and evaluates the jet of `N` at points of that strip.

use nalgebra::Vector3;

use crate::curve::SphericalCurve;
use crate::error::{Error, Result};
use crate::fourier::{product_safe_grid, FourierCurve3, FourierSeries, UniformGrid};
use crate::tol;

/// Taylor layers of the harmonic Gauss map `N(u, v) = sum c_k(u) v^k`.
#[derive(Debug, Clone)]
pub struct GaussJet {
    layers: Vec<FourierCurve3>,
    trust_height: f64,
    norm_defects: Vec<f64>,
    layer_sups: Vec<f64>,
}

impl GaussJet {
    /// Taylor layers `c_0 ..= c_{K_v}`.
    pub fn layers(&self) -> &[FourierCurve3] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &FourierCurve3 {
        &self.layers[k]
    }

    /// Taylor order `K_v`.
    pub fn order(&self) -> usize {
        self.layers.len() - 1
    }

    /// Mode truncation `M_u` shared by all layers.
    pub fn degree(&self) -> usize {
        self.layers[0].degree()
    }

    /// Height of the strip on which the truncated series is trusted.
    pub fn trust_height(&self) -> f64 {
        self.trust_height
    }

    /// Per-order unit-norm residual maxima (coefficient magnitudes).
    pub fn norm_defects(&self) -> &[f64] {
        &self.norm_defects
    }

    /// Sup norm of each layer over a dense grid.
    pub fn layer_sups(&self) -> &[f64] {
        &self.layer_sups
    }

    /// Rebuild a jet with substituted layers but the same quality
    /// metadata. Only valid for layer substitutions that preserve
    /// magnitudes mode by mode (sign flips, rigid rotations), which is
    /// why this stays crate-internal.
    pub(crate) fn with_layers_of(template: &GaussJet, layers: Vec<FourierCurve3>) -> GaussJet {
        assert_eq!(template.layers.len(), layers.len());
        GaussJet {
            layers,
            trust_height: template.trust_height,
            norm_defects: template.norm_defects.clone(),
            layer_sups: template.layer_sups.clone(),
        }
    }
}

/// Value and partial derivatives of the Gauss map at one strip point.
#[derive(Debug, Clone, Copy)]
pub struct GaussEval {
    pub n: Vector3<f64>,
    /// `(N_u, N_v)` when at least first derivatives were requested.
    pub first: Option<(Vector3<f64>, Vector3<f64>)>,
    /// `(N_uu, N_uv, N_vv)` when second derivatives were requested.
    pub second: Option<(Vector3<f64>, Vector3<f64>, Vector3<f64>)>,
}

/// Build the Taylor layers of the harmonic Gauss map with Cauchy data
/// `(alpha, 0)`, to order `k_v` in the strip coordinate and mode
/// truncation `m_u`.
///
/// Matching powers of `v` in the harmonic-map equation gives the
/// recurrence
/// `c_{k+2} = -[c_k'' + Phi_k] / ((k+1)(k+2))`,
/// where `Phi_k` is the `k`-th layer of `(|N_u|^2 + |N_v|^2) N`. Products
/// are formed pointwise on an oversampled grid and re-projected, which
/// keeps every retained mode alias-free.
pub fn solve_cauchy(alpha: &SphericalCurve, k_v: usize, m_u: usize) -> Result<GaussJet> {
    if k_v < 2 {
        return Err(Error::Domain {
            reason: format!("Taylor order {k_v} too small; need at least 2"),
        });
    }
    if m_u < alpha.fourier().degree() {
        return Err(Error::Domain {
            reason: format!(
                "mode truncation {m_u} below the input mode count {}",
                alpha.fourier().degree()
            ),
        });
    }

    let grid = product_safe_grid(m_u);
    let mut layers: Vec<FourierCurve3> = Vec::with_capacity(k_v + 1);
    layers.push(alpha.fourier().padded(m_u));
    layers.push(FourierCurve3::zero(m_u));

    // Grid caches: values and u-derivatives of each layer, plus the
    // scalar layers of |N_u|^2 + |N_v|^2.
    let mut vals: Vec<Vec<Vector3<f64>>> = Vec::with_capacity(k_v + 1);
    let mut dvals: Vec<Vec<Vector3<f64>>> = Vec::with_capacity(k_v + 1);
    for layer in &layers {
        vals.push(layer.sample(&grid));
        dvals.push(layer.derivative().sample(&grid));
    }
    let mut energy: Vec<Vec<f64>> = Vec::with_capacity(k_v.saturating_sub(1));

    for k in 0..=k_v.saturating_sub(2) {
        // E_k = sum_{i+j=k} <c_i', c_j'> + (i+1)(j+1) <c_{i+1}, c_{j+1}>.
        let mut e_k = vec![0.0f64; grid.len()];
        for i in 0..=k {
            let j = k - i;
            let w = ((i + 1) * (j + 1)) as f64;
            for (g, e) in e_k.iter_mut().enumerate() {
                *e += dvals[i][g].dot(&dvals[j][g]) + w * vals[i + 1][g].dot(&vals[j + 1][g]);
            }
        }

        // Phi_k = sum_{i+j=k} E_i c_j, assembled pointwise.
        energy.push(e_k);
        let mut phi = vec![Vector3::zeros(); grid.len()];
        for i in 0..=k {
            let e_i = &energy[i];
            let c_j = &vals[k - i];
            for (g, p) in phi.iter_mut().enumerate() {
                *p += c_j[g] * e_i[g];
            }
        }
        let phi_sup = phi.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
        let phi = FourierCurve3::project(&grid, &phi, m_u);

        // Grid products spray roundoff into every retained mode, and the
        // recurrence amplifies a spurious mode `m` by `m^2 / ((k+1)(k+2))`
        // per step — fatal for data whose true bandwidth is far below
        // `m_u`. Coefficients below the roundoff floor of this layer's
        // own arithmetic carry no information, so they are snapped to
        // exact zeros. The floor tracks the error of the normalized
        // projection sums (O(eps) per coefficient) plus the `k + 1`-term
        // pointwise accumulation of `Phi_k`.
        let scale = -1.0 / (((k + 1) * (k + 2)) as f64);
        let second = layers[k].derivative_n(2);
        let floor =
            8.0 * (k + 2) as f64 * f64::EPSILON * (phi_sup + second.max_coeff()) * scale.abs();
        let next = denoised(second.axpy(1.0, &phi).scaled(scale), floor);
        vals.push(next.sample(&grid));
        dvals.push(next.derivative().sample(&grid));
        layers.push(next);
    }

    let layer_sups: Vec<f64> = vals
        .iter()
        .map(|v| v.iter().map(|p| p.norm()).fold(0.0, f64::max))
        .collect();
    let trust_height = trust_height_from_sups(&layer_sups);
    if trust_height < tol::STRIP_DIVERGENCE_FLOOR {
        return Err(Error::Divergence {
            trust_height,
            floor: tol::STRIP_DIVERGENCE_FLOOR,
        });
    }

    // Quality gates, weighted by the trusted height. High modes of high
    // layers amplify injected roundoff like m^k / k! (the intrinsic
    // ill-posedness of the elliptic Cauchy problem), so raw coefficient
    // bounds are unattainable for well-resolved data; what must be small
    // is the contribution v^k * (layer-k defect) anywhere on the strip
    // that evaluations are allowed to touch.
    let weight = |k: usize| trust_height.min(1.0).powi(k as i32);

    // Aliasing check: content in the top modes must be negligible
    // against the overall scale on the trusted strip.
    let head_total = layers
        .iter()
        .enumerate()
        .map(|(k, l)| l.max_coeff() * weight(k))
        .fold(0.0f64, f64::max);
    for (k, layer) in layers.iter().enumerate() {
        let tail = layer.tail_coeff() * weight(k);
        let threshold = tol::RESOLUTION_FRACTION * head_total;
        if tail > threshold {
            return Err(Error::UnderResolved { tail, threshold });
        }
    }

    // The reported per-order unit-norm residuals stay raw; the gate is
    // applied on the strip.
    let norm_defects = unit_norm_defects(&vals, &grid, m_u);
    for (k, defect) in norm_defects.iter().enumerate() {
        let weighted = defect * weight(k);
        if weighted > tol::GAUSS_NORM_DEFECT {
            return Err(Error::NormDefect {
                defect: weighted,
                tolerance: tol::GAUSS_NORM_DEFECT,
            });
        }
    }

    Ok(GaussJet {
        layers,
        trust_height,
        norm_defects,
        layer_sups,
    })
}

/// Per-order unit-norm residuals: the `k`-th entry is the largest
/// Fourier coefficient of `sum_{i+j=k} <c_i, c_j> - delta_{k0}`.
pub fn norm_defect(jet: &GaussJet) -> Vec<f64> {
    let grid = product_safe_grid(jet.degree());
    let vals: Vec<Vec<Vector3<f64>>> = jet.layers.iter().map(|l| l.sample(&grid)).collect();
    unit_norm_defects(&vals, &grid, jet.degree())
}

/// Zero every mode whose coefficient is below `floor`. The per-mode
/// vector norm keeps the decision rotation-equivariant.
fn denoised(curve: FourierCurve3, floor: f64) -> FourierCurve3 {
    curve.map_coeffs(|c| {
        if c.norm() <= floor {
            Vector3::zeros()
        } else {
            *c
        }
    })
}

fn unit_norm_defects(vals: &[Vec<Vector3<f64>>], grid: &UniformGrid, m_u: usize) -> Vec<f64> {
    let order = vals.len() - 1;
    let mut defects = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut samples = vec![0.0f64; grid.len()];
        for i in 0..=k {
            let j = k - i;
            for (g, s) in samples.iter_mut().enumerate() {
                *s += vals[i][g].dot(&vals[j][g]);
            }
        }
        if k == 0 {
            for s in samples.iter_mut() {
                *s -= 1.0;
            }
        }
        // The residual is a product of two degree-m_u factors, so the
        // oversampled grid projects it exactly at degree 2 m_u.
        let series = FourierSeries::project(grid, &samples, 2 * m_u);
        defects.push(series.max_coeff());
    }
    defects
}

/// Largest strip height at which the geometric extrapolation of the
/// layer norms keeps the discarded tail below the fixed bound.
pub fn estimate_strip(jet: &GaussJet) -> f64 {
    trust_height_from_sups(&jet.layer_sups)
}

fn trust_height_from_sups(sups: &[f64]) -> f64 {
    let order = sups.len() - 1;
    let base_index = order.saturating_sub(2);
    let scale = sups.iter().fold(0.0f64, |a, &b| a.max(b)).max(1e-300);

    // Odd layers vanish identically for our Cauchy data, so the growth
    // rate is estimated from consecutive even layers; the largest recent
    // ratio is used, which errs on the conservative side.
    let mut ratio = 0.0f64;
    let mut pairs = 0;
    let mut k = if order % 2 == 0 { order } else { order - 1 };
    while k >= 4 && pairs < 3 {
        if sups[k] > 1e-280 && sups[k - 2] > 1e-280 {
            ratio = ratio.max((sups[k] / sups[k - 2]).sqrt());
            pairs += 1;
        }
        k -= 2;
    }
    let base = sups[base_index].max(sups[base_index.saturating_sub(1)]);
    if pairs == 0 || base <= 1e-14 * scale {
        // Tail is numerically zero: the series is exact on the whole
        // strip; cap the trusted height at one.
        return 1.0;
    }

    let tail = |v: f64| -> f64 {
        let rv = ratio * v;
        if rv >= 1.0 {
            return f64::INFINITY;
        }
        base * v.powi(base_index as i32) * rv / (1.0 - rv)
    };

    let cap = 1.0f64;
    if tail(cap) < tol::STRIP_TAIL_BOUND {
        return cap;
    }
    let (mut lo, mut hi) = (0.0f64, cap.min(1.0 / ratio));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) < tol::STRIP_TAIL_BOUND {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Evaluate the Gauss map and its partial derivatives up to
/// `deriv_order` (at most 2) at a point of the trusted strip.
pub fn evaluate_gauss(jet: &GaussJet, u: f64, v: f64, deriv_order: usize) -> Result<GaussEval> {
    if deriv_order > 2 {
        return Err(Error::UnsupportedOrder {
            order: deriv_order,
            max: 2,
        });
    }
    if v.abs() > jet.trust_height {
        return Err(Error::Extrapolation {
            v,
            trust_height: jet.trust_height,
        });
    }

    // Per-layer u-jets, then Horner sums in v for each derivative.
    let jets: Vec<Vec<Vector3<f64>>> = jet
        .layers
        .iter()
        .map(|layer| layer.jet(u, deriv_order.min(2)))
        .collect();

    let horner = |weight: &dyn Fn(usize) -> f64, component: usize, shift: usize| -> Vector3<f64> {
        let mut acc = Vector3::zeros();
        for k in (shift..jets.len()).rev() {
            acc = acc * v + jets[k][component] * weight(k);
        }
        acc
    };

    let n = horner(&|_| 1.0, 0, 0);
    let first = (deriv_order >= 1).then(|| {
        let n_u = horner(&|_| 1.0, 1, 0);
        let n_v = horner(&|k| k as f64, 0, 1);
        (n_u, n_v)
    });
    let second = (deriv_order >= 2).then(|| {
        let n_uu = horner(&|_| 1.0, 2, 0);
        let n_uv = horner(&|k| k as f64, 1, 1);
        let n_vv = horner(&|k| (k * (k - 1)) as f64, 0, 2);
        (n_uu, n_uv, n_vv)
    });

    Ok(GaussEval { n, first, second })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{builtin_circle, builtin_equator, SphericalCurve};
    use approx::assert_relative_eq;

    fn perturbed_circle() -> SphericalCurve {
        // A circle with a fixed, asymmetric mode-2/3 perturbation; kept
        // spherical by radial normalization.
        let a = 0.5f64;
        let r = (1.0 - a * a).sqrt();
        let cos = vec![
            Vector3::new(0.0, 0.0, a),
            Vector3::new(r, 0.0, 0.0),
            Vector3::new(0.012, -0.004, 0.021),
            Vector3::new(-0.006, 0.009, 0.002),
        ];
        let sin = vec![
            Vector3::new(0.0, r, 0.008),
            Vector3::new(0.005, 0.017, -0.011),
            Vector3::new(0.003, -0.002, 0.007),
        ];
        let raw = FourierCurve3::new(cos, sin).unwrap();
        SphericalCurve::radially_normalized(&raw).unwrap()
    }

    #[test]
    fn constant_datum_extends_constantly() {
        let alpha =
            SphericalCurve::from_fourier(FourierCurve3::constant(Vector3::z()).padded(8)).unwrap();
        let jet = solve_cauchy(&alpha, 6, 8).unwrap();
        for layer in &jet.layers()[1..] {
            assert!(layer.max_coeff() < 1e-15);
        }
        assert_eq!(jet.trust_height(), 1.0);
        let e = evaluate_gauss(&jet, 1.3, 0.7, 2).unwrap();
        assert!((e.n - Vector3::z()).norm() < 1e-15);
        assert!(e.first.unwrap().0.norm() < 1e-15);
    }

    #[test]
    fn equator_datum_is_constant_in_v() {
        let jet = solve_cauchy(&builtin_equator(), 10, 8).unwrap();
        for layer in &jet.layers()[1..] {
            assert!(layer.max_coeff() < 1e-13, "layer norm {}", layer.max_coeff());
        }
        assert_eq!(jet.trust_height(), 1.0);
        let e = evaluate_gauss(&jet, 0.0, 0.2, 0).unwrap();
        assert!((e.n - Vector3::x()).norm() < 1e-13);
        for d in norm_defect(&jet) {
            assert!(d < 1e-13);
        }
    }

    #[test]
    fn circle_jet_structure() {
        let alpha = builtin_circle(0.5).unwrap();
        let jet = solve_cauchy(&alpha, 24, 8).unwrap();

        // Odd layers vanish identically because the initial v-velocity
        // is zero.
        for k in (1..=jet.order()).step_by(2) {
            assert!(jet.layer(k).max_coeff() < 1e-14);
        }
        // The circle keeps its two u-modes: nothing leaks upward.
        for layer in jet.layers() {
            for m in 2..=layer.degree() {
                assert!(layer.cos_coeffs()[m].amax() < 1e-12);
                assert!(layer.sin_coeffs()[m - 1].amax() < 1e-12);
            }
        }
        for d in jet.norm_defects() {
            assert!(*d <= 1e-10);
        }
        assert!(jet.trust_height() >= 0.3, "trust {}", jet.trust_height());
        assert!(estimate_strip(&jet) == jet.trust_height());
    }

    #[test]
    fn second_order_layer_consistency() {
        // With zero initial v-velocity the order-two unit-norm identity
        // forces c_2 perpendicular to c_0; differentiating |c_0|^2 = 1
        // twice forces <c_0'', c_0> = -|c_0'|^2. Both must hold for any
        // datum.
        let alpha = perturbed_circle();
        let jet = solve_cauchy(&alpha, 8, 4 * alpha.fourier().degree()).unwrap();
        let grid = UniformGrid::new(257);
        let c0 = jet.layer(0);
        let d0 = c0.derivative();
        let dd0 = c0.derivative_n(2);
        let c2 = jet.layer(2);
        for &s in grid.nodes() {
            let v0 = c0.eval(s);
            assert_relative_eq!(c2.eval(s).dot(&v0), 0.0, epsilon = 1e-10);
            assert_relative_eq!(d0.eval(s).dot(&v0), 0.0, epsilon = 1e-10);
            assert_relative_eq!(
                dd0.eval(s).dot(&v0),
                -d0.eval(s).norm_squared(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn layers_are_rotation_equivariant() {
        let alpha = perturbed_circle();
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -0.8, 1.2);
        let rotated =
            SphericalCurve::from_fourier(alpha.fourier().map_coeffs(|c| rot * c)).unwrap();

        let jet = solve_cauchy(&alpha, 10, 4 * alpha.fourier().degree()).unwrap();
        let jet_rot = solve_cauchy(&rotated, 10, 4 * alpha.fourier().degree()).unwrap();
        let t = jet.trust_height().min(jet_rot.trust_height()).min(1.0);
        for (k, (a, b)) in jet.layers().iter().zip(jet_rot.layers()).enumerate() {
            // Weight by the trusted height: high layers only ever enter
            // evaluations multiplied by v^k.
            let diff = a.map_coeffs(|c| rot * c).axpy(-1.0, b).max_coeff() * t.powi(k as i32);
            assert!(diff < 1e-12, "layer {k} deviation {diff}");
        }
    }

    #[test]
    fn evaluation_contracts() {
        let alpha = builtin_circle(0.5).unwrap();
        let jet = solve_cauchy(&alpha, 12, 8).unwrap();

        // v = 0 returns the datum exactly.
        let e = evaluate_gauss(&jet, 0.9, 0.0, 1).unwrap();
        assert!((e.n - alpha.eval(0.9)).norm() < 1e-15);

        // Beyond the trusted strip: extrapolation error.
        let too_far = jet.trust_height() * 1.5;
        assert!(matches!(
            evaluate_gauss(&jet, 0.0, too_far, 0),
            Err(Error::Extrapolation { .. })
        ));
        assert!(matches!(
            evaluate_gauss(&jet, 0.0, 0.0, 3),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn refinement_is_spectrally_converged() {
        let alpha = builtin_circle(0.5).unwrap();
        let coarse = solve_cauchy(&alpha, 24, 8).unwrap();
        let fine = solve_cauchy(&alpha, 32, 16).unwrap();
        let v = 0.25f64.min(coarse.trust_height());
        for &u in &[0.0, 0.7, 2.1, 4.9] {
            let a = evaluate_gauss(&coarse, u, v, 0).unwrap();
            let b = evaluate_gauss(&fine, u, v, 0).unwrap();
            assert!((a.n - b.n).norm() < 1e-8, "deviation {}", (a.n - b.n).norm());
        }
    }

    #[test]
    fn finite_difference_validates_gauss_derivatives() {
        let alpha = perturbed_circle();
        let jet = solve_cauchy(&alpha, 10, 4 * alpha.fourier().degree()).unwrap();
        let (u0, v0, h) = (1.1, 0.05, 1e-5);
        let e = evaluate_gauss(&jet, u0, v0, 2).unwrap();
        let n = |u: f64, v: f64| evaluate_gauss(&jet, u, v, 0).unwrap().n;

        let du = (n(u0 + h, v0) - n(u0 - h, v0)) / (2.0 * h);
        let dv = (n(u0, v0 + h) - n(u0, v0 - h)) / (2.0 * h);
        let (n_u, n_v) = e.first.unwrap();
        assert!((du - n_u).norm() < 1e-9);
        assert!((dv - n_v).norm() < 1e-9);

        let duv = (n(u0 + h, v0 + h) - n(u0 + h, v0 - h) - n(u0 - h, v0 + h)
            + n(u0 - h, v0 - h))
            / (4.0 * h * h);
        let (_, n_uv, _) = e.second.unwrap();
        assert!((duv - n_uv).norm() < 1e-6);
    }
}
