//! Surfaces of Gaussian curvature one built from harmonic Gauss-map
//! jets, together with exact rotational models and the classical
//! transforms (parallel constant-mean-curvature companions, reflection
//! extension, contact-geometry dual).
//!
//! The representation formula recovers the surface from its Gauss map by
//! quadrature: `X_u = N x N_v`, `X_v = -N x N_u`. Term-by-term
//! integration in the strip coordinate turns the Taylor layers of `N`
//! into Taylor layers of `X - p`, where `p` is the singular base point
//! that the whole initial curve collapses to.

mod rotational;
mod transforms;

pub use rotational::{
    limit_circle_curvature_candidates, peaked_sphere_diameter, pole_height, rotational_conformal,
    rotational_peaked_sphere, rotational_strip_patch, ConformalStructure,
};
pub use transforms::{legendre_transform, parallel_cmc, CmcSign};

use nalgebra::Vector3;

use crate::cauchy::GaussJet;
use crate::error::{Error, Result};
use crate::fourier::{product_safe_grid, FourierCurve3};
use crate::tol;

/// How a patch was produced; diagnostics select checks based on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchOrigin {
    CauchyPipeline,
    RotationalExact,
    ParallelCmc,
    Reflection,
    Legendre,
}

impl PatchOrigin {
    pub fn as_str(&self) -> &'static str {
        match self {
            PatchOrigin::CauchyPipeline => "cauchy-pipeline",
            PatchOrigin::RotationalExact => "rotational-exact",
            PatchOrigin::ParallelCmc => "parallel-cmc",
            PatchOrigin::Reflection => "reflection",
            PatchOrigin::Legendre => "legendre",
        }
    }
}

/// Taylor-layer data a sampled strip patch can carry along, enabling
/// exact series differentiation in `v` (and spectral differentiation in
/// `u`) of derived quantities that pointwise 2-jets cannot reach.
#[derive(Debug, Clone)]
pub struct StripSeries {
    /// Layers of the Gauss map, `c_0 ..= c_{K_v}`.
    pub c_layers: Vec<FourierCurve3>,
    /// Layers of `X - p`, `d_1 ..= d_{K_v + 1}`.
    pub d_layers: Vec<FourierCurve3>,
    pub trust_height: f64,
}

/// Rectangular grid of samples of a surface and its 2-jet, plus the unit
/// normal and its 2-jet. Storage is row-major over `(u_index, v_index)`.
#[derive(Debug, Clone)]
pub struct SurfacePatch {
    pub us: Vec<f64>,
    pub vs: Vec<f64>,
    pub x: Vec<Vector3<f64>>,
    pub x_u: Vec<Vector3<f64>>,
    pub x_v: Vec<Vector3<f64>>,
    pub x_uu: Vec<Vector3<f64>>,
    pub x_uv: Vec<Vector3<f64>>,
    pub x_vv: Vec<Vector3<f64>>,
    pub n: Vec<Vector3<f64>>,
    pub n_u: Vec<Vector3<f64>>,
    pub n_v: Vec<Vector3<f64>>,
    pub n_uu: Vec<Vector3<f64>>,
    pub n_uv: Vec<Vector3<f64>>,
    pub n_vv: Vec<Vector3<f64>>,
    pub origin: PatchOrigin,
    /// Whether `(u, v)` are conformal coordinates for the second
    /// fundamental form of this patch.
    pub ii_conformal: bool,
    /// Whether the u-direction closes up (full period).
    pub u_periodic: bool,
    /// Samples where the patch itself is degenerate (used by the
    /// parallel construction, where the shift can collapse the metric).
    pub singular: Vec<bool>,
    /// Generating series, present when the patch came from a strip jet.
    pub series: Option<StripSeries>,
}

impl SurfacePatch {
    pub fn u_count(&self) -> usize {
        self.us.len()
    }

    pub fn v_count(&self) -> usize {
        self.vs.len()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    #[inline]
    pub fn idx(&self, i_u: usize, j_v: usize) -> usize {
        i_u * self.vs.len() + j_v
    }

    /// Allocate a patch of the right shape with zeroed samples.
    pub(crate) fn zeroed(
        us: Vec<f64>,
        vs: Vec<f64>,
        origin: PatchOrigin,
        ii_conformal: bool,
        u_periodic: bool,
    ) -> Self {
        let len = us.len() * vs.len();
        let z = vec![Vector3::zeros(); len];
        SurfacePatch {
            us,
            vs,
            x: z.clone(),
            x_u: z.clone(),
            x_v: z.clone(),
            x_uu: z.clone(),
            x_uv: z.clone(),
            x_vv: z.clone(),
            n: z.clone(),
            n_u: z.clone(),
            n_v: z.clone(),
            n_uu: z.clone(),
            n_uv: z.clone(),
            n_vv: z,
            origin,
            ii_conformal,
            u_periodic,
            singular: vec![false; len],
            series: None,
        }
    }
}

/// Taylor layers of `X - p` in the strip coordinate, together with the
/// generating Gauss jet.
#[derive(Debug, Clone)]
pub struct SurfaceJet {
    p: Vector3<f64>,
    /// `layers[k - 1]` holds `d_k`, for `k = 1 ..= K_v + 1`; there is no
    /// constant layer because the whole initial circle maps to `p`.
    layers: Vec<FourierCurve3>,
    gauss: GaussJet,
    compat_residual: f64,
    reflected: bool,
}

impl SurfaceJet {
    /// Singular base point.
    pub fn base_point(&self) -> Vector3<f64> {
        self.p
    }

    /// Layer `d_k` (`k >= 1`).
    pub fn layer(&self, k: usize) -> &FourierCurve3 {
        &self.layers[k - 1]
    }

    /// Highest stored layer index.
    pub fn top_layer(&self) -> usize {
        self.layers.len()
    }

    pub fn gauss(&self) -> &GaussJet {
        &self.gauss
    }

    pub fn trust_height(&self) -> f64 {
        self.gauss.trust_height()
    }

    /// Recorded mixed-partial compatibility residual.
    pub fn compatibility_residual(&self) -> f64 {
        self.compat_residual
    }

    /// Surface point at `(u, v)`, without a trust check (test helper;
    /// production callers go through the samplers, which validate).
    #[cfg(test)]
    fn eval(&self, u: f64, v: f64) -> Vector3<f64> {
        let mut acc = Vector3::zeros();
        for layer in self.layers.iter().rev() {
            acc = (acc + layer.eval(u)) * v;
        }
        self.p + acc
    }

    /// `(X, X_u, X_v)` at an arbitrary strip point; callers are
    /// responsible for keeping `v` inside the trusted strip.
    pub(crate) fn eval_jet1(&self, u: f64, v: f64) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
        let mut x = Vector3::zeros();
        let mut x_u = Vector3::zeros();
        let mut x_v = Vector3::zeros();
        for (idx, layer) in self.layers.iter().enumerate().rev() {
            let k = (idx + 1) as f64;
            let jet = layer.jet(u, 1);
            x = x * v + jet[0];
            x_u = x_u * v + jet[1];
            x_v = x_v * v + jet[0] * k;
        }
        (self.p + x * v, x_u * v, x_v)
    }
}

/// Integrate the representation formula `X_v = -N x N_u` layer by layer:
/// `d_k = -(1/k) * [N x N_u]_{k-1}`.
///
/// Harmonicity of `N` makes the resulting one-form closed, so the mixed
/// partial identity `d_k' = [N x N_v]_k` must hold; its residual is
/// recorded and gates acceptance.
pub fn integrate_surface(jet: &GaussJet, p: Vector3<f64>) -> Result<SurfaceJet> {
    let m_u = jet.degree();
    let grid = product_safe_grid(m_u);
    let c: Vec<Vec<Vector3<f64>>> = jet.layers().iter().map(|l| l.sample(&grid)).collect();
    let du: Vec<Vec<Vector3<f64>>> = jet
        .layers()
        .iter()
        .map(|l| l.derivative().sample(&grid))
        .collect();
    let k_v = jet.order();

    let mut layers = Vec::with_capacity(k_v + 1);
    for k in 1..=k_v + 1 {
        // (N x N_u) coefficient of v^{k-1}.
        let mut samples = vec![Vector3::zeros(); grid.len()];
        for i in 0..k {
            let j = k - 1 - i;
            for (g, s) in samples.iter_mut().enumerate() {
                *s += c[i][g].cross(&du[j][g]);
            }
        }
        let d_k = FourierCurve3::project(&grid, &samples, m_u).scaled(-1.0 / k as f64);
        layers.push(d_k);
    }

    // Mixed-partial compatibility: d_k' must reproduce the v-layers of
    // N x N_v = sum over i + j = k of (j+1) c_i x c_{j+1}. The highest
    // layers lack complete cross-term data, so the check stops where the
    // sum is still exact. Defects are weighted by the trusted height,
    // matching how each layer enters evaluations on the strip.
    let trust = jet.trust_height().min(1.0);
    let mut residual = 0.0f64;
    for k in 1..k_v {
        let mut samples = vec![Vector3::zeros(); grid.len()];
        for i in 0..=k {
            let j = k - i;
            let weight = (j + 1) as f64;
            for (g, s) in samples.iter_mut().enumerate() {
                *s += c[i][g].cross(&c[j + 1][g]) * weight;
            }
        }
        let rhs = FourierCurve3::project(&grid, &samples, m_u);
        let defect = layers[k - 1].derivative().axpy(-1.0, &rhs).max_coeff();
        residual = residual.max(defect * trust.powi(k as i32));
    }
    if residual > tol::INTEGRABILITY_ABORT {
        return Err(Error::Integrability {
            residual,
            tolerance: tol::INTEGRABILITY_ABORT,
        });
    }

    Ok(SurfaceJet {
        p,
        layers,
        gauss: jet.clone(),
        compat_residual: residual,
        reflected: false,
    })
}

/// Reflection of the surface about its base point, as a new jet: the
/// extension rule is `X(u, -v) = 2p - X(u, v)` with `N(u, -v) = N(u, v)`,
/// so layers pick up alternating signs. Applying it twice restores the
/// original coefficients exactly.
pub fn reflect_extend(sjet: &SurfaceJet) -> SurfaceJet {
    let layers = sjet
        .layers
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            let k = idx + 1;
            // d_k maps to (-1)^{k+1} d_k.
            if k % 2 == 0 {
                d.scaled(-1.0)
            } else {
                d.clone()
            }
        })
        .collect();

    let gauss_layers: Vec<FourierCurve3> = sjet
        .gauss
        .layers()
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { c.scaled(-1.0) } else { c.clone() })
        .collect();
    let gauss = GaussJet::with_layers_of(&sjet.gauss, gauss_layers);

    SurfaceJet {
        p: sjet.p,
        layers,
        gauss,
        compat_residual: sjet.compat_residual,
        reflected: !sjet.reflected,
    }
}

/// Sample a rectangular patch of the surface and its 2-jet from the
/// stored series; all derivatives are exact (mode-wise in `u`,
/// term-wise in `v`), nothing is grid-differenced.
pub fn sample_patch(
    sjet: &SurfaceJet,
    u_count: usize,
    v_range: (f64, f64),
    v_count: usize,
) -> Result<SurfacePatch> {
    let (v_lo, v_hi) = v_range;
    if !(v_lo < v_hi) || u_count < 2 || v_count < 2 {
        return Err(Error::Domain {
            reason: format!(
                "invalid patch grid: u_count {u_count}, v_range [{v_lo}, {v_hi}], v_count {v_count}"
            ),
        });
    }
    let trust = sjet.trust_height();
    if v_lo.abs() > trust || v_hi.abs() > trust {
        return Err(Error::Extrapolation {
            v: if v_lo.abs() > trust { v_lo } else { v_hi },
            trust_height: trust,
        });
    }

    let us: Vec<f64> = (0..u_count)
        .map(|i| std::f64::consts::TAU * i as f64 / u_count as f64)
        .collect();
    let vs: Vec<f64> = (0..v_count)
        .map(|j| v_lo + (v_hi - v_lo) * j as f64 / (v_count - 1) as f64)
        .collect();

    let origin = if sjet.reflected {
        PatchOrigin::Reflection
    } else {
        PatchOrigin::CauchyPipeline
    };
    let mut patch = SurfacePatch::zeroed(us.clone(), vs.clone(), origin, true, true);

    let k_d = sjet.layers.len();
    let k_c = sjet.gauss.layers().len();
    for (i, &u) in us.iter().enumerate() {
        // u-jets of every layer at this u.
        let d_jets: Vec<Vec<Vector3<f64>>> =
            sjet.layers.iter().map(|l| l.jet(u, 2)).collect();
        let c_jets: Vec<Vec<Vector3<f64>>> =
            sjet.gauss.layers().iter().map(|l| l.jet(u, 2)).collect();

        for (j, &v) in vs.iter().enumerate() {
            let at = patch.idx(i, j);

            // X-side sums: layers run k = 1 ..= k_d.
            let mut x = Vector3::zeros();
            let mut x_u = Vector3::zeros();
            let mut x_v = Vector3::zeros();
            let mut x_uu = Vector3::zeros();
            let mut x_uv = Vector3::zeros();
            let mut x_vv = Vector3::zeros();
            for k in (1..=k_d).rev() {
                let jet_k = &d_jets[k - 1];
                let kf = k as f64;
                x = x * v + jet_k[0];
                x_u = x_u * v + jet_k[1];
                x_uu = x_uu * v + jet_k[2];
                x_v = x_v * v + jet_k[0] * kf;
                x_uv = x_uv * v + jet_k[1] * kf;
                if k >= 2 {
                    x_vv = x_vv * v + jet_k[0] * (kf * (kf - 1.0));
                }
            }
            // The lowest power differs per stream: X carries v^1, X_v
            // carries v^0, X_vv carries v^0 starting from d_2.
            patch.x[at] = sjet.p + x * v;
            patch.x_u[at] = x_u * v;
            patch.x_uu[at] = x_uu * v;
            patch.x_v[at] = x_v;
            patch.x_uv[at] = x_uv;
            patch.x_vv[at] = x_vv;

            let mut n = Vector3::zeros();
            let mut n_u = Vector3::zeros();
            let mut n_v = Vector3::zeros();
            let mut n_uu = Vector3::zeros();
            let mut n_uv = Vector3::zeros();
            let mut n_vv = Vector3::zeros();
            for k in (0..k_c).rev() {
                let jet_k = &c_jets[k];
                let kf = k as f64;
                n = n * v + jet_k[0];
                n_u = n_u * v + jet_k[1];
                n_uu = n_uu * v + jet_k[2];
                if k >= 1 {
                    n_v = n_v * v + jet_k[0] * kf;
                    n_uv = n_uv * v + jet_k[1] * kf;
                }
                if k >= 2 {
                    n_vv = n_vv * v + jet_k[0] * (kf * (kf - 1.0));
                }
            }
            patch.n[at] = n;
            patch.n_u[at] = n_u;
            patch.n_uu[at] = n_uu;
            patch.n_v[at] = n_v;
            patch.n_uv[at] = n_uv;
            patch.n_vv[at] = n_vv;
        }
    }
    patch.series = Some(StripSeries {
        c_layers: sjet.gauss.layers().to_vec(),
        d_layers: sjet.layers.clone(),
        trust_height: trust,
    });
    Ok(patch)
}
