//! Real trigonometric polynomials on the circle.
//!
//! Everything periodic in the toolkit is represented by a truncated real
//! Fourier series
//!
//! ```text
//!   f(s) = a_0 + sum_{m=1}^{M} ( a_m cos(m s) + b_m sin(m s) )
//! ```
//!
//! with exact mode-wise differentiation. Products of series are never
//! formed by coefficient convolution; instead both factors are evaluated
//! on a shared oversampled uniform grid, multiplied pointwise, and the
//! result is projected back onto the basis. With `n` grid points the
//! projection onto modes `0..=M` is alias-free for integrands of trig
//! degree up to `n - M - 1`, which the grid sizes used here guarantee for
//! the three-factor products the solver needs.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::tol;

/// Uniform periodic grid `s_j = 2 pi j / n`, shared by all pointwise work.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid {
    nodes: Vec<f64>,
}

impl UniformGrid {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "grid must have at least one node");
        let h = std::f64::consts::TAU / n as f64;
        UniformGrid {
            nodes: (0..n).map(|j| j as f64 * h).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Scalar truncated Fourier series.
///
/// `cos[m]` holds `a_m` for `m = 0..=degree`; `sin[m-1]` holds `b_m` for
/// `m = 1..=degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierSeries {
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Self {
        assert_eq!(
            cos.len(),
            sin.len() + 1,
            "cosine table must have exactly one more entry than the sine table"
        );
        FourierSeries { cos, sin }
    }

    pub fn zero(degree: usize) -> Self {
        FourierSeries {
            cos: vec![0.0; degree + 1],
            sin: vec![0.0; degree],
        }
    }

    pub fn constant(value: f64) -> Self {
        FourierSeries {
            cos: vec![value],
            sin: vec![],
        }
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mut acc = self.cos[0];
        for m in 1..=self.degree() {
            let (sin_ms, cos_ms) = (m as f64 * s).sin_cos();
            acc += self.cos[m] * cos_ms + self.sin[m - 1] * sin_ms;
        }
        acc
    }

    /// Exact derivative: `d/ds (a cos(ms) + b sin(ms)) = mb cos(ms) - ma sin(ms)`.
    pub fn derivative(&self) -> Self {
        let degree = self.degree();
        let mut cos = vec![0.0; degree + 1];
        let mut sin = vec![0.0; degree];
        for m in 1..=degree {
            cos[m] = m as f64 * self.sin[m - 1];
            sin[m - 1] = -(m as f64) * self.cos[m];
        }
        FourierSeries { cos, sin }
    }

    /// Largest coefficient magnitude over all modes.
    pub fn max_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .fold(0.0f64, |acc, c| acc.max(c.abs()))
    }

    /// Largest coefficient magnitude over the top two modes.
    pub fn tail_coeff(&self) -> f64 {
        let degree = self.degree();
        let mut tail = 0.0f64;
        for m in (degree.saturating_sub(1))..=degree {
            if m >= 1 {
                tail = tail.max(self.cos[m].abs()).max(self.sin[m - 1].abs());
            }
        }
        tail
    }

    /// Project grid samples onto modes `0..=degree`.
    ///
    /// Exact whenever the samples come from a trig polynomial of degree at
    /// most `grid.len() - degree - 1` (no aliasing into the kept modes).
    pub fn project(grid: &UniformGrid, values: &[f64], degree: usize) -> Self {
        assert_eq!(grid.len(), values.len());
        let n = grid.len();
        assert!(
            n > 2 * degree,
            "grid too coarse to resolve the requested degree"
        );
        let scale = 2.0 / n as f64;
        let mut cos = vec![0.0; degree + 1];
        let mut sin = vec![0.0; degree];
        cos[0] = values.iter().sum::<f64>() / n as f64;
        for m in 1..=degree {
            let mut ac = 0.0;
            let mut as_ = 0.0;
            for (j, &s) in grid.nodes().iter().enumerate() {
                let (sin_ms, cos_ms) = (m as f64 * s).sin_cos();
                ac += values[j] * cos_ms;
                as_ += values[j] * sin_ms;
            }
            cos[m] = scale * ac;
            sin[m - 1] = scale * as_;
        }
        FourierSeries { cos, sin }
    }

    pub fn sample(&self, grid: &UniformGrid) -> Vec<f64> {
        grid.nodes().iter().map(|&s| self.eval(s)).collect()
    }
}

/// Closed curve in R^3 as a trig polynomial with vector coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCurve3 {
    cos: Vec<Vector3<f64>>,
    sin: Vec<Vector3<f64>>,
}

impl FourierCurve3 {
    /// Build from coefficient tables; `cos` holds modes `0..=M`, `sin`
    /// modes `1..=M`.
    pub fn new(cos: Vec<Vector3<f64>>, sin: Vec<Vector3<f64>>) -> Result<Self> {
        if cos.len() != sin.len() + 1 {
            return Err(Error::InvalidInput {
                reason: format!(
                    "cosine table has {} entries but sine table has {}; expected one more cosine entry",
                    cos.len(),
                    sin.len()
                ),
            });
        }
        Ok(FourierCurve3 { cos, sin })
    }

    pub fn constant(p: Vector3<f64>) -> Self {
        FourierCurve3 {
            cos: vec![p],
            sin: vec![],
        }
    }

    pub fn zero(degree: usize) -> Self {
        FourierCurve3 {
            cos: vec![Vector3::zeros(); degree + 1],
            sin: vec![Vector3::zeros(); degree],
        }
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[Vector3<f64>] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[Vector3<f64>] {
        &self.sin
    }

    pub fn eval(&self, s: f64) -> Vector3<f64> {
        let mut acc = self.cos[0];
        for m in 1..=self.degree() {
            let (sin_ms, cos_ms) = (m as f64 * s).sin_cos();
            acc += self.cos[m] * cos_ms + self.sin[m - 1] * sin_ms;
        }
        acc
    }

    /// Exact mode-wise derivative.
    pub fn derivative(&self) -> Self {
        let degree = self.degree();
        let mut cos = vec![Vector3::zeros(); degree + 1];
        let mut sin = vec![Vector3::zeros(); degree];
        for m in 1..=degree {
            cos[m] = self.sin[m - 1] * m as f64;
            sin[m - 1] = -self.cos[m] * m as f64;
        }
        FourierCurve3 { cos, sin }
    }

    /// Coefficient-wise linear combination `self + factor * other`,
    /// padding the shorter operand with zero modes.
    pub fn axpy(&self, factor: f64, other: &Self) -> Self {
        let degree = self.degree().max(other.degree());
        let a = self.padded(degree);
        let b = other.padded(degree);
        let cos = a
            .cos
            .iter()
            .zip(b.cos.iter())
            .map(|(x, y)| x + y * factor)
            .collect();
        let sin = a
            .sin
            .iter()
            .zip(b.sin.iter())
            .map(|(x, y)| x + y * factor)
            .collect();
        FourierCurve3 { cos, sin }
    }

    /// Coefficient-wise scaling.
    pub fn scaled(&self, factor: f64) -> Self {
        FourierCurve3 {
            cos: self.cos.iter().map(|c| c * factor).collect(),
            sin: self.sin.iter().map(|c| c * factor).collect(),
        }
    }

    /// Extend with zero coefficients up to `degree` (no-op if the curve
    /// already has at least that many modes). Exactly band-limited data
    /// should be padded this way so that the resolution check, which
    /// inspects the top modes, is meaningful.
    pub fn padded(&self, degree: usize) -> Self {
        if degree <= self.degree() {
            return self.clone();
        }
        let mut cos = self.cos.clone();
        let mut sin = self.sin.clone();
        cos.resize(degree + 1, Vector3::zeros());
        sin.resize(degree, Vector3::zeros());
        FourierCurve3 { cos, sin }
    }

    /// Derivative of arbitrary order, still exact.
    pub fn derivative_n(&self, order: usize) -> Self {
        let mut d = self.clone();
        for _ in 0..order {
            d = d.derivative();
        }
        d
    }

    /// Value and derivatives `0..=order` at a single parameter.
    pub fn jet(&self, s: f64, order: usize) -> Vec<Vector3<f64>> {
        let mut out = Vec::with_capacity(order + 1);
        let mut d = self.clone();
        out.push(d.eval(s));
        for _ in 0..order {
            d = d.derivative();
            out.push(d.eval(s));
        }
        out
    }

    pub fn sample(&self, grid: &UniformGrid) -> Vec<Vector3<f64>> {
        grid.nodes().iter().map(|&s| self.eval(s)).collect()
    }

    /// Largest coefficient magnitude (infinity norm over components).
    pub fn max_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .fold(0.0f64, |acc, c| acc.max(c.amax()))
    }

    /// Largest coefficient magnitude over the top two modes.
    pub fn tail_coeff(&self) -> f64 {
        let degree = self.degree();
        let mut tail = 0.0f64;
        for m in (degree.saturating_sub(1))..=degree {
            if m >= 1 {
                tail = tail.max(self.cos[m].amax()).max(self.sin[m - 1].amax());
            }
        }
        tail
    }

    /// Check that trailing modes are negligible relative to the head.
    pub fn check_resolved(&self) -> Result<()> {
        let head = self.max_coeff();
        let tail = self.tail_coeff();
        let threshold = tol::RESOLUTION_FRACTION * head;
        if tail > threshold {
            return Err(Error::UnderResolved { tail, threshold });
        }
        Ok(())
    }

    /// Project vector-valued grid samples onto modes `0..=degree`,
    /// component by component.
    pub fn project(grid: &UniformGrid, values: &[Vector3<f64>], degree: usize) -> Self {
        assert_eq!(grid.len(), values.len());
        let comps: Vec<FourierSeries> = (0..3)
            .map(|c| {
                let vals: Vec<f64> = values.iter().map(|v| v[c]).collect();
                FourierSeries::project(grid, &vals, degree)
            })
            .collect();
        let mut cos = vec![Vector3::zeros(); degree + 1];
        let mut sin = vec![Vector3::zeros(); degree];
        for m in 0..=degree {
            cos[m] = Vector3::new(comps[0].cos_coeffs()[m], comps[1].cos_coeffs()[m], comps[2].cos_coeffs()[m]);
            if m >= 1 {
                sin[m - 1] = Vector3::new(
                    comps[0].sin_coeffs()[m - 1],
                    comps[1].sin_coeffs()[m - 1],
                    comps[2].sin_coeffs()[m - 1],
                );
            }
        }
        FourierCurve3 { cos, sin }
    }

    /// Apply a linear map to every coefficient (rotations commute with the
    /// basis, so this rotates the whole curve).
    pub fn map_coeffs(&self, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Self {
        FourierCurve3 {
            cos: self.cos.iter().map(&f).collect(),
            sin: self.sin.iter().map(&f).collect(),
        }
    }
}

/// Grid size that keeps projections onto modes `0..=degree` alias-free for
/// products of up to three factors of that degree (total trig degree
/// `3*degree`, so `n > 4*degree` suffices; the `+1` keeps it strict).
pub fn product_safe_grid(degree: usize) -> UniformGrid {
    UniformGrid::new((4 * degree + 1).max(8))
}
