//! Fully nonlinear curvature check on extracted height graphs.
//!
//! A surface of Gaussian curvature `K` that is a graph `z = u(x, y)`
//! satisfies `u_xx u_yy - u_xy^2 = K (1 + u_x^2 + u_y^2)^2`. Checking
//! this on a graph resampled from the patch is the one verification
//! that shares no machinery with the construction: plain heights on a
//! plain grid, differentiated by finite differences.

use crate::cauchy::evaluate_gauss;
use crate::error::{Error, Result};
use crate::surface::SurfaceJet;
use crate::tol;

/// Height samples over a uniform planar grid, row-major in `x`.
#[derive(Debug, Clone)]
pub struct GraphSamples {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub heights: Vec<f64>,
}

impl GraphSamples {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.heights[i * self.ys.len() + j]
    }
}

fn uniform_step(grid: &[f64], axis: &str) -> Result<f64> {
    if grid.len() < 5 {
        return Err(Error::Domain {
            reason: format!(
                "{axis} grid has {} nodes; fourth-order stencils need at least 5",
                grid.len()
            ),
        });
    }
    let h = grid[1] - grid[0];
    if h <= 0.0 {
        return Err(Error::Domain {
            reason: format!("{axis} grid is not increasing"),
        });
    }
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
            return Err(Error::Domain {
                reason: format!("{axis} grid is not uniform"),
            });
        }
    }
    Ok(h)
}

/// Max residual of the curvature equation over the interior of the
/// grid (two-node margin), using fourth-order centred differences.
pub fn monge_ampere_residual(graph: &GraphSamples, k: f64) -> Result<f64> {
    let hx = uniform_step(&graph.xs, "x")?;
    let hy = uniform_step(&graph.ys, "y")?;
    let nx = graph.xs.len();
    let ny = graph.ys.len();

    // Fourth-order centred first and second derivative weights on
    // offsets -2..=2.
    let d1 = [1.0, -8.0, 0.0, 8.0, -1.0];
    let d2 = [-1.0, 16.0, -30.0, 16.0, -1.0];

    let mut worst = 0.0f64;
    for i in 2..nx - 2 {
        for j in 2..ny - 2 {
            let mut ux = 0.0;
            let mut uy = 0.0;
            let mut uxx = 0.0;
            let mut uyy = 0.0;
            let mut uxy = 0.0;
            for (a, off_x) in (-2i64..=2).enumerate() {
                let iu = (i as i64 + off_x) as usize;
                ux += d1[a] * graph.at(iu, j);
                uxx += d2[a] * graph.at(iu, j);
                for (b, off_y) in (-2i64..=2).enumerate() {
                    uxy += d1[a] * d1[b] * graph.at(iu, (j as i64 + off_y) as usize);
                }
            }
            for (b, off_y) in (-2i64..=2).enumerate() {
                let ju = (j as i64 + off_y) as usize;
                uy += d1[b] * graph.at(i, ju);
                uyy += d2[b] * graph.at(i, ju);
            }
            ux /= 12.0 * hx;
            uy /= 12.0 * hy;
            uxx /= 12.0 * hx * hx;
            uyy /= 12.0 * hy * hy;
            uxy /= 144.0 * hx * hy;

            let residual = uxx * uyy - uxy * uxy - k * (1.0 + ux * ux + uy * uy).powi(2);
            worst = worst.max(residual.abs());
        }
    }
    Ok(worst)
}

/// Resample a strip surface as a height graph over the given planar
/// grid by inverting the horizontal projection with Newton's method.
///
/// The seed locates the sheet: iteration marches across the grid,
/// seeding each node with its solved neighbour, and refuses to cross
/// the singular axis or leave the trusted strip. After solving, the
/// normal's vertical component must keep one sign across the window —
/// otherwise the projection was not a graph.
pub fn extract_graph(
    sjet: &SurfaceJet,
    seed: (f64, f64),
    xs: &[f64],
    ys: &[f64],
) -> Result<GraphSamples> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Domain {
            reason: "empty graph grid".to_string(),
        });
    }
    let trust = sjet.trust_height();
    let v_sign = seed.1.signum();
    if seed.1 == 0.0 || seed.1.abs() > trust {
        return Err(Error::GraphExtraction {
            reason: format!("seed height {} outside the open trusted strip", seed.1),
        });
    }

    let solve = |target_x: f64, target_y: f64, start: (f64, f64)| -> Result<(f64, f64, f64)> {
        let (mut u, mut v) = start;
        let scale = 1.0 + target_x.abs() + target_y.abs();
        for _ in 0..60 {
            let (x, xu, xv) = sjet.eval_jet1(u, v);
            let rx = x.x - target_x;
            let ry = x.y - target_y;
            if rx.hypot(ry) <= tol::GRAPH_NEWTON * scale {
                return Ok((u, v, x.z));
            }
            let det = xu.x * xv.y - xv.x * xu.y;
            if det.abs() < 1e-300 {
                break;
            }
            u -= (rx * xv.y - ry * xv.x) / det;
            v -= (ry * xu.x - rx * xu.y) / det;
            if v.signum() != v_sign {
                return Err(Error::GraphExtraction {
                    reason: format!(
                        "projection crossed the singular axis near ({target_x}, {target_y})"
                    ),
                });
            }
            if v.abs() > trust {
                return Err(Error::GraphExtraction {
                    reason: format!(
                        "projection left the trusted strip near ({target_x}, {target_y})"
                    ),
                });
            }
        }
        Err(Error::GraphExtraction {
            reason: format!("projection not invertible near ({target_x}, {target_y})"),
        })
    };

    let mut heights = vec![0.0; xs.len() * ys.len()];
    let mut params = vec![(0.0, 0.0); xs.len() * ys.len()];
    let mut row_start = seed;
    for (i, &x) in xs.iter().enumerate() {
        let (u0, v0, z0) = solve(x, ys[0], row_start)?;
        row_start = (u0, v0);
        heights[i * ys.len()] = z0;
        params[i * ys.len()] = (u0, v0);
        let mut prev = (u0, v0);
        for (j, &y) in ys.iter().enumerate().skip(1) {
            let (u, v, z) = solve(x, y, prev)?;
            prev = (u, v);
            heights[i * ys.len() + j] = z;
            params[i * ys.len() + j] = (u, v);
        }
    }

    // Graph direction check: N_3 bounded away from zero with one sign.
    let mut sign = 0.0f64;
    let mut min_abs = f64::INFINITY;
    for &(u, v) in &params {
        let n3 = evaluate_gauss(sjet.gauss(), u, v, 0)?.n.z;
        min_abs = min_abs.min(n3.abs());
        if sign == 0.0 {
            sign = n3.signum();
        } else if n3.signum() != sign {
            return Err(Error::GraphExtraction {
                reason: "normal's vertical component changes sign across the window".to_string(),
            });
        }
    }
    if min_abs < tol::HORIZON_FLOOR {
        return Err(Error::GraphExtraction {
            reason: format!("normal grazes the horizon (min |N3| = {min_abs:.3e})"),
        });
    }

    Ok(GraphSamples {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        heights,
    })
}
