//! Truncated power series in the strip coordinate with `f64`
//! coefficients, plus the handful of nonlinear operations the
//! structural identities need (products, quotients, square roots and
//! the inverse hyperbolic sine of a series with no constant term).
//!
//! All operations truncate at an explicit length; the diagnostics keep
//! one series per angular node, so these stay small and allocation cost
//! is irrelevant next to the spectral projections around them.

use nalgebra::Vector3;

/// Power series `sum a_k v^k`, truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct VSeries(Vec<f64>);

impl VSeries {
    pub fn zeros(len: usize) -> Self {
        VSeries(vec![0.0; len])
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        VSeries(coeffs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    #[cfg(test)]
    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.len().max(o.len());
        VSeries((0..len).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let len = self.len().max(o.len());
        VSeries((0..len).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn scale(&self, factor: f64) -> Self {
        VSeries(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn mul(&self, o: &Self, len: usize) -> Self {
        let mut out = vec![0.0; len];
        for (i, a) in self.0.iter().enumerate().take(len) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        VSeries(out)
    }

    /// Quotient of series; the divisor needs a nonzero constant term.
    pub fn div(&self, o: &Self, len: usize) -> Self {
        let b0 = o.coeff(0);
        debug_assert!(b0 != 0.0, "series division by vanishing constant term");
        let mut out = vec![0.0; len];
        for k in 0..len {
            let mut acc = self.coeff(k);
            for i in 0..k {
                acc -= out[i] * o.coeff(k - i);
            }
            out[k] = acc / b0;
        }
        VSeries(out)
    }

    /// Square root of a series with positive constant term.
    pub fn sqrt(&self, len: usize) -> Self {
        let a0 = self.coeff(0);
        debug_assert!(a0 > 0.0, "series square root needs a positive constant term");
        let mut out = vec![0.0; len];
        out[0] = a0.sqrt();
        for k in 1..len {
            let mut acc = self.coeff(k);
            for i in 1..k {
                acc -= out[i] * out[k - i];
            }
            out[k] = acc / (2.0 * out[0]);
        }
        VSeries(out)
    }

    /// Compose the inverse hyperbolic sine with a series whose constant
    /// term vanishes, via the odd Maclaurin expansion in Horner form.
    pub fn asinh_compose(&self, len: usize) -> Self {
        debug_assert!(
            self.coeff(0) == 0.0,
            "asinh composition needs a vanishing constant term"
        );
        // Coefficients of asinh(t) = sum gamma_m t^(2m+1), built from the
        // ratio gamma_m / gamma_(m-1) = -(2m-1)^2 / (2m (2m+1)).
        let terms = len.div_ceil(2).max(1);
        let mut gammas = Vec::with_capacity(terms);
        let mut g = 1.0;
        gammas.push(g);
        for m in 1..terms {
            let mf = m as f64;
            g *= -(2.0 * mf - 1.0).powi(2) / ((2.0 * mf) * (2.0 * mf + 1.0));
            gammas.push(g);
        }
        let t2 = self.mul(self, len);
        let mut acc = VSeries::zeros(len);
        acc.0[0] = gammas[terms - 1];
        for m in (0..terms - 1).rev() {
            acc = acc.mul(&t2, len);
            acc.0[0] += gammas[m];
        }
        acc.mul(self, len)
    }

    /// Derivative with respect to `v`.
    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return VSeries::zeros(1);
        }
        VSeries(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, a)| (i + 1) as f64 * a)
                .collect(),
        )
    }

    pub fn eval(&self, v: f64) -> f64 {
        let mut acc = 0.0;
        for a in self.0.iter().rev() {
            acc = acc * v + a;
        }
        acc
    }
}

/// Power series with `Vector3` coefficients; just enough structure to
/// form the scalar products the fundamental quantities are built from.
#[derive(Debug, Clone)]
pub struct VecSeries(Vec<Vector3<f64>>);

impl VecSeries {
    pub fn from_coeffs(coeffs: Vec<Vector3<f64>>) -> Self {
        VecSeries(coeffs)
    }

    pub fn dot(&self, o: &Self, len: usize) -> VSeries {
        let mut out = vec![0.0; len];
        for (i, a) in self.0.iter().enumerate().take(len) {
            for (j, b) in o.0.iter().enumerate().take(len - i) {
                out[i + j] += a.dot(b);
            }
        }
        VSeries::from_coeffs(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn product_and_quotient_round_trip() {
        let a = VSeries::from_coeffs(vec![1.0, -0.5, 0.25, 0.1]);
        let b = VSeries::from_coeffs(vec![2.0, 1.0, 0.0, -0.3]);
        let q = a.mul(&b, 4).div(&b, 4);
        for k in 0..4 {
            assert_abs_diff_eq!(q.coeff(k), a.coeff(k), epsilon = 1e-14);
        }
    }

    #[test]
    fn square_root_squares_back() {
        let a = VSeries::from_coeffs(vec![4.0, 1.0, -0.2, 0.05, 0.01]);
        let r = a.sqrt(5);
        let sq = r.mul(&r, 5);
        for k in 0..5 {
            assert_abs_diff_eq!(sq.coeff(k), a.coeff(k), epsilon = 1e-13);
        }
    }

    #[test]
    fn asinh_series_matches_pointwise_values() {
        // t(v) = 0.7 v - 0.2 v^2: compare the composed series against
        // direct evaluation for small v.
        let t = VSeries::from_coeffs(vec![0.0, 0.7, -0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let w = t.asinh_compose(10);
        for &v in &[0.01_f64, 0.05, 0.1, 0.2] {
            let exact = (0.7 * v - 0.2 * v * v).asinh();
            assert_abs_diff_eq!(w.eval(v), exact, epsilon = 1e-10);
        }
    }

    #[test]
    fn derivative_shifts_and_scales() {
        let a = VSeries::from_coeffs(vec![3.0, 1.0, 4.0, 1.5]);
        let d = a.derivative();
        assert_eq!(d.coeffs(), &[1.0, 8.0, 4.5]);
    }

    #[test]
    fn vector_dot_collects_cross_terms() {
        let x = VecSeries::from_coeffs(vec![Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 2.0, 0.0)]);
        let y = VecSeries::from_coeffs(vec![Vector3::new(0.0, 1.0, 0.0), Vector3::new(0.0, 1.0, 3.0)]);
        let d = x.dot(&y, 3);
        assert_eq!(d.coeffs(), &[0.0, 2.0, 2.0]);
    }
}
