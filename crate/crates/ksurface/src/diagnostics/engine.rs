//! Per-node power series of the fundamental scalars along the strip.
//!
//! Pointwise 2-jets stored on a patch cannot reach quantities like the
//! Laplacian of the strip function `omega`: that needs one more exact
//! derivative in each direction. This engine rebuilds everything from
//! the generating layers instead — every scalar becomes a power series
//! in `v` per dense `u`-node (exact, coefficient by coefficient), and
//! `u`-derivatives are taken spectrally on the node values of each
//! coefficient. Nothing is grid-differenced.

use nalgebra::Vector3;

use crate::fourier::{product_safe_grid, FourierSeries};
use crate::surface::StripSeries;
use crate::tol;

use super::vseries::{VSeries, VecSeries};

/// Fundamental scalars as `v`-series on a dense `u`-grid.
pub(crate) struct StripEngine {
    /// Dense evaluation nodes in `u`.
    pub us: Vec<f64>,
    /// Signed support-style coefficient `rho = -<X_u, N_u>/2` per node.
    pub rho: Vec<VSeries>,
    /// Strip function `omega = arcsinh(rho / |Q|)` per node; placeholder
    /// zero series at excluded nodes.
    pub omega: Vec<VSeries>,
    /// `omega_uu + omega_vv` per node; `None` when umbilic-excluded
    /// nodes would poison the spectral `u`-derivative.
    pub omega_lap: Option<Vec<VSeries>>,
    /// Nodes where `|Q|` at the axis is too small to divide by.
    pub excluded: Vec<bool>,
    pub trust: f64,
}

impl StripEngine {
    pub fn build(series: &StripSeries) -> Self {
        let m_u = series.c_layers[0].degree();
        // Rows of derived series (quotients, arcsinh) are analytic but
        // not band-limited; project them at twice the data bandwidth,
        // on a grid oversampled enough for that projection to be exact
        // on products of raw layers.
        let degree = 2 * m_u;
        let grid = product_safe_grid(degree);
        let n = grid.len();
        let len = series.d_layers.len() + 1;

        let cd: Vec<Vec<Vector3<f64>>> = series
            .c_layers
            .iter()
            .map(|l| l.derivative().sample(&grid))
            .collect();
        let d: Vec<Vec<Vector3<f64>>> =
            series.d_layers.iter().map(|l| l.sample(&grid)).collect();
        let dd: Vec<Vec<Vector3<f64>>> = series
            .d_layers
            .iter()
            .map(|l| l.derivative().sample(&grid))
            .collect();

        let mut rho = Vec::with_capacity(n);
        let mut q2 = Vec::with_capacity(n);
        for g in 0..n {
            // X - p = sum_k d_k v^k, so X_u collects d_k' at power k
            // (nothing at power zero: the axis is a single point).
            let mut xu_c = vec![Vector3::zeros(); series.d_layers.len() + 1];
            for (k, row) in dd.iter().enumerate() {
                xu_c[k + 1] = row[g];
            }
            let xu = VecSeries::from_coeffs(xu_c);
            // X_v = sum_k k d_k v^(k-1).
            let xv = VecSeries::from_coeffs(
                d.iter()
                    .enumerate()
                    .map(|(k, row)| row[g] * (k + 1) as f64)
                    .collect(),
            );
            let nu = VecSeries::from_coeffs(cd.iter().map(|row| row[g]).collect());

            rho.push(xu.dot(&nu, len).scale(-0.5));
            let e = xu.dot(&xu, len);
            let g_m = xv.dot(&xv, len);
            let f_m = xu.dot(&xv, len);
            let q_re = e.sub(&g_m).scale(0.25);
            let q_im = f_m.scale(-0.5);
            q2.push(q_re.mul(&q_re, len).add(&q_im.mul(&q_im, len)));
        }

        let axis_q: Vec<f64> = q2.iter().map(|s| s.coeff(0).max(0.0).sqrt()).collect();
        let q_max = axis_q.iter().cloned().fold(0.0f64, f64::max);
        let excluded: Vec<bool> = axis_q
            .iter()
            .map(|&q| q <= tol::UMBILIC_FRACTION * q_max || q == 0.0)
            .collect();

        let mut omega = Vec::with_capacity(n);
        for g in 0..n {
            if excluded[g] {
                omega.push(VSeries::zeros(1));
                continue;
            }
            let aq = q2[g].sqrt(len);
            // rho has no constant term by construction (X_u vanishes on
            // the axis), so the composition below is well-posed.
            let t = rho[g].div(&aq, len);
            omega.push(t.asinh_compose(len));
        }

        let omega_lap = if excluded.iter().any(|&e| e) {
            None
        } else {
            let mut uu = vec![vec![0.0; len]; n];
            for k in 0..len {
                let row: Vec<f64> = omega.iter().map(|w| w.coeff(k)).collect();
                let second = FourierSeries::project(&grid, &row, degree)
                    .derivative()
                    .derivative();
                for (g, value) in second.sample(&grid).into_iter().enumerate() {
                    uu[g][k] = value;
                }
            }
            Some(
                uu.into_iter()
                    .zip(&omega)
                    .map(|(coeffs, w)| {
                        VSeries::from_coeffs(coeffs).add(&w.derivative().derivative())
                    })
                    .collect(),
            )
        };

        StripEngine {
            us: grid.nodes().to_vec(),
            rho,
            omega,
            omega_lap,
            excluded,
            trust: series.trust_height,
        }
    }

    /// Max residual of the balance `(omega_uu + omega_vv)/4 + |Q| sinh
    /// omega` over the probe heights. Because `omega` is built so that
    /// `|Q| sinh omega = rho` holds identically as series, the source
    /// term is evaluated as `rho`; the content of the check is that the
    /// Laplacian side matches it. `None` when umbilic nodes prevented
    /// the spectral step.
    pub fn sinh_gordon_residual(&self, probes: &[f64]) -> Option<f64> {
        let lap = self.omega_lap.as_ref()?;
        let mut worst = 0.0f64;
        for (g, l) in lap.iter().enumerate() {
            if self.excluded[g] {
                continue;
            }
            for &v in probes {
                if v.abs() > self.trust {
                    continue;
                }
                let r = l.eval(v) / 4.0 + self.rho[g].eval(v);
                worst = worst.max(r.abs());
            }
        }
        Some(worst)
    }
}
