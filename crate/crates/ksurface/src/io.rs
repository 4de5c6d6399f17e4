//! Curve ingestion and mesh serialization.
//!
//! The input format is a small JSON description of a closed curve in the
//! Fourier basis; the output formats are Wavefront OBJ (quad mesh with
//! normals) and CSV (per-sample table including both curvatures). All
//! writers emit floats with 17 significant digits and iterate the grid
//! in a fixed order, so identical inputs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use nalgebra::Vector3;
use serde::Deserialize;

use crate::curve::SphericalCurve;
use crate::diagnostics::raw_curvatures;
use crate::error::{Error, Result};
use crate::fourier::FourierCurve3;
use crate::surface::SurfacePatch;
use crate::tol;

/// JSON schema for a closed curve: coefficient rows are `[x, y, z]`
/// triples, `cos` holding modes `0..`, `sin` modes `1..` (the tables may
/// have unequal lengths; the shorter is zero-padded). With `normalize`
/// (the default) the curve is projected radially onto the sphere;
/// without it the input must already be spherical.
#[derive(Debug, Deserialize)]
struct CurveSpec {
    #[serde(default)]
    cos: Vec<[f64; 3]>,
    #[serde(default)]
    sin: Vec<[f64; 3]>,
    #[serde(default = "default_normalize")]
    normalize: bool,
}

fn default_normalize() -> bool {
    true
}

/// Parse a JSON curve description into a validated spherical curve.
///
/// Failure modes are distinct error classes: malformed JSON, a curve
/// passing too close to the origin for radial projection, a non-spherical
/// curve when `normalize` is off, and under-resolved Fourier data.
pub fn parse_curve_spec(text: &str) -> Result<SphericalCurve> {
    let spec: CurveSpec = serde_json::from_str(text)?;

    let degree = spec.cos.len().saturating_sub(1).max(spec.sin.len());
    let mut cos = vec![Vector3::zeros(); degree + 1];
    let mut sin = vec![Vector3::zeros(); degree];
    for (row, slot) in spec.cos.iter().zip(cos.iter_mut()) {
        *slot = Vector3::new(row[0], row[1], row[2]);
    }
    for (row, slot) in spec.sin.iter().zip(sin.iter_mut()) {
        *slot = Vector3::new(row[0], row[1], row[2]);
    }
    let curve = FourierCurve3::new(cos, sin)?;

    // Origin clearance is checked up front for both paths: a curve that
    // meets the origin has no radial direction to project along, and as
    // "already spherical" data it is equally meaningless.
    let scan = crate::fourier::product_safe_grid(curve.degree().max(8));
    let min_norm = scan
        .nodes()
        .iter()
        .map(|&s| curve.eval(s).norm())
        .fold(f64::INFINITY, f64::min);
    if min_norm <= tol::ORIGIN_CLEARANCE {
        return Err(Error::OriginCrossing { min_norm });
    }

    if spec.normalize {
        SphericalCurve::radially_normalized(&curve)
    } else {
        SphericalCurve::from_fourier(curve)
    }
}

/// Mesh output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

impl MeshFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            MeshFormat::Obj => "obj",
            MeshFormat::Csv => "csv",
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialize the patch as a Wavefront OBJ quad mesh.
///
/// Vertices and normals appear row-major in the sample order of the
/// patch; faces cover every grid cell, and a `u`-periodic patch gets one
/// extra column of faces stitching the last profile back to the first.
/// The export is refused wholesale when any face would be degenerate
/// (zero area at the scale of the patch), because such a mesh
/// misrepresents the surface.
pub fn write_obj(patch: &SurfacePatch, out: &mut dyn Write) -> Result<()> {
    let nu = patch.us.len();
    let nv = patch.vs.len();

    // Bounding-box diagonal sets the scale against which a face counts
    // as degenerate.
    let mut lo = Vector3::repeat(f64::INFINITY);
    let mut hi = Vector3::repeat(f64::NEG_INFINITY);
    for p in &patch.x {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let scale2 = (hi - lo).norm_squared().max(f64::MIN_POSITIVE);

    let u_faces = if patch.u_periodic { nu } else { nu - 1 };
    let mut degenerate = 0usize;
    let mut first: Option<(usize, usize)> = None;
    for i in 0..u_faces {
        let i2 = (i + 1) % nu;
        for j in 0..nv - 1 {
            let a = patch.x[patch.idx(i, j)];
            let b = patch.x[patch.idx(i2, j)];
            let c = patch.x[patch.idx(i2, j + 1)];
            let d = patch.x[patch.idx(i, j + 1)];
            // Quad area through the diagonals; exact for planar quads
            // and a sound degeneracy measure in general.
            let area = 0.5 * (c - a).cross(&(d - b)).norm();
            if area <= tol::DEGENERATE_FACE_FRACTION * scale2 {
                degenerate += 1;
                first.get_or_insert((i, j));
            }
        }
    }
    if degenerate > 0 {
        let (row, col) = first.unwrap();
        return Err(Error::DegenerateFace {
            count: degenerate,
            row,
            col,
        });
    }

    let mut text = String::with_capacity(64 * nu * nv);
    for p in &patch.x {
        text.push_str(&format!("v {} {} {}\n", fmt(p.x), fmt(p.y), fmt(p.z)));
    }
    for n in &patch.n {
        text.push_str(&format!("vn {} {} {}\n", fmt(n.x), fmt(n.y), fmt(n.z)));
    }
    for i in 0..u_faces {
        let i2 = (i + 1) % nu;
        for j in 0..nv - 1 {
            // OBJ indices are 1-based; vertex and normal tables align.
            let a = patch.idx(i, j) + 1;
            let b = patch.idx(i2, j) + 1;
            let c = patch.idx(i2, j + 1) + 1;
            let d = patch.idx(i, j + 1) + 1;
            text.push_str(&format!("f {a}//{a} {b}//{b} {c}//{c} {d}//{d}\n"));
        }
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Serialize the patch as a CSV table, one row per sample in row-major
/// order, with both curvatures from raw derivatives (`NaN` where the
/// metric degenerates).
pub fn write_csv(patch: &SurfacePatch, out: &mut dyn Write) -> Result<()> {
    let mut text = String::with_capacity(64 * patch.len());
    text.push_str("u,v,x,y,z,nx,ny,nz,H,K\n");
    for (i, &u) in patch.us.iter().enumerate() {
        for (j, &v) in patch.vs.iter().enumerate() {
            let at = patch.idx(i, j);
            let p = &patch.x[at];
            let n = &patch.n[at];
            let (h, k) = raw_curvatures(patch, at);
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                fmt(u),
                fmt(v),
                fmt(p.x),
                fmt(p.y),
                fmt(p.z),
                fmt(n.x),
                fmt(n.y),
                fmt(n.z),
                fmt(h),
                fmt(k)
            ));
        }
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Write the patch to `path` in the requested format.
pub fn export_mesh(patch: &SurfacePatch, format: MeshFormat, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    match format {
        MeshFormat::Obj => write_obj(patch, &mut file)?,
        MeshFormat::Csv => write_csv(patch, &mut file)?,
    }
    Ok(())
}
