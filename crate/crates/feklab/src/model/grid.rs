//! Scalar fields sampled on a chart grid.

use super::chart::Chart;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// A real scalar field on the nodes of a [`Chart`].
///
/// Values are finite except for an explicit `-∞` sentinel, which marks
/// logarithmic poles; nothing in this crate ever stores `+∞` or NaN.
#[derive(Clone, Debug)]
pub struct GridFunction {
    chart: Chart,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_values(chart: Chart, values: Vec<f64>) -> Result<Self> {
        if values.len() != chart.node_count() {
            return Err(Error::Config(format!(
                "grid function needs {} values, got {}",
                chart.node_count(),
                values.len()
            )));
        }
        if values.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::Numeric("grid function value is NaN or +inf".into()));
        }
        Ok(GridFunction { chart, values })
    }

    pub fn from_fn(chart: Chart, f: impl Fn(Complex64) -> f64) -> Self {
        let n = chart.side();
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                values.push(f(chart.node(j, k)));
            }
        }
        GridFunction { chart, values }
    }

    pub fn constant(chart: Chart, c: f64) -> Self {
        GridFunction {
            values: vec![c; chart.node_count()],
            chart,
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[self.chart.index(j, k)]
    }

    pub fn set(&mut self, j: usize, k: usize, v: f64) {
        let idx = self.chart.index(j, k);
        self.values[idx] = v;
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            chart: self.chart,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.chart, other.chart, "charts must match");
        GridFunction {
            chart: self.chart,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Supremum of `|self|` over all nodes, ignoring `-∞` sentinels.
    pub fn sup_abs(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0, |m, &v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn min_finite(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Five-point Laplacian `(u_E + u_W + u_N + u_S - 4u_C)/h²` at an
    /// interior node.
    pub fn laplacian_5pt(&self, j: usize, k: usize) -> f64 {
        debug_assert!(self.chart.is_interior(j, k));
        let h = self.chart.spacing();
        (self.get(j + 1, k) + self.get(j - 1, k) + self.get(j, k + 1) + self.get(j, k - 1)
            - 4.0 * self.get(j, k))
            / (h * h)
    }

    /// Bilinear interpolation at a point inside the box.
    pub fn eval(&self, z: Complex64) -> f64 {
        let h = self.chart.spacing();
        let r = self.chart.half_width();
        let n = self.chart.side();
        let fx = ((z.re + r) / h).clamp(0.0, (n - 1) as f64);
        let fy = ((z.im + r) / h).clamp(0.0, (n - 1) as f64);
        let j0 = (fx.floor() as usize).min(n - 2);
        let k0 = (fy.floor() as usize).min(n - 2);
        let tx = fx - j0 as f64;
        let ty = fy - k0 as f64;
        let v00 = self.get(j0, k0);
        let v10 = self.get(j0 + 1, k0);
        let v01 = self.get(j0, k0 + 1);
        let v11 = self.get(j0 + 1, k0 + 1);
        (1.0 - tx) * (1.0 - ty) * v00 + tx * (1.0 - ty) * v10 + (1.0 - tx) * ty * v01 + tx * ty * v11
    }

    /// Midpoint-rule integral `Σ f(node)·h²` over all nodes.
    pub fn cell_integral(&self) -> f64 {
        let h2 = self.chart.spacing().powi(2);
        crate::util::pairwise_sum(&self.values) * h2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_affine() {
        let chart = Chart::new(2.0, 8).unwrap();
        let g = GridFunction::from_fn(chart, |z| 1.5 * z.re - 0.25 * z.im + 3.0);
        let z = Complex64::new(0.3137, -1.234);
        let exact = 1.5 * z.re - 0.25 * z.im + 3.0;
        assert!((g.eval(z) - exact).abs() < 1e-12);
    }

    #[test]
    fn laplacian_of_quadratic() {
        let chart = Chart::new(2.0, 16).unwrap();
        let g = GridFunction::from_fn(chart, |z| z.re * z.re + 2.0 * z.im * z.im);
        // Δ(x² + 2y²) = 6, exactly reproduced by the 5-point stencil.
        assert!((g.laplacian_5pt(10, 12) - 6.0).abs() < 1e-9);
    }
}
