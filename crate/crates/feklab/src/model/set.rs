//! Weighted compact sets: a grid mask plus a weight function.

use super::chart::Chart;
use super::grid::GridFunction;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Shape of a built-in compact set.  The analytic description is kept next
/// to the rasterized mask so that solvers can place candidate points exactly
/// on the boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SetShape {
    /// Closed unit disc `|z| ≤ 1`.
    UnitDisc,
    /// The segment `[-1, 1]`, rasterized as the one-cell-thick strip
    /// `|Im z| ≤ h/2`, `|Re z| ≤ 1`.
    Interval,
    /// Annulus `r ≤ |z| ≤ 1`.
    Annulus(f64),
    /// Square `[-1, 1]²`.
    Square,
    /// The whole model (every grid node belongs to the set).
    WholeChart,
}

impl SetShape {
    /// Defining inequality, evaluated at a cell center.
    pub fn contains(&self, z: Complex64, h: f64) -> bool {
        match *self {
            SetShape::UnitDisc => z.norm_sqr() <= 1.0,
            SetShape::Interval => z.im.abs() <= 0.5 * h && z.re.abs() <= 1.0,
            SetShape::Annulus(r) => {
                let n = z.norm();
                r <= n && n <= 1.0
            }
            SetShape::Square => z.re.abs() <= 1.0 && z.im.abs() <= 1.0,
            SetShape::WholeChart => true,
        }
    }

    /// Largest coordinate reached by the set: the margin to the box edge is
    /// `R` minus this.
    pub fn outer_extent(&self) -> f64 {
        match *self {
            SetShape::UnitDisc
            | SetShape::Interval
            | SetShape::Annulus(_)
            | SetShape::Square => 1.0,
            SetShape::WholeChart => f64::INFINITY,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SetShape::UnitDisc => "unit-disc",
            SetShape::Interval => "interval",
            SetShape::Annulus(_) => "annulus",
            SetShape::Square => "square",
            SetShape::WholeChart => "whole-chart",
        }
    }
}

/// A compact set `K` (grid mask) together with a weight on it.
///
/// The weight is stored on the full grid; only its restriction to the mask
/// is meaningful for envelope obstacles and Vandermonde weights, but having
/// values everywhere is convenient for plotting and path integrals.
#[derive(Clone, Debug)]
pub struct WeightedSet {
    chart: Chart,
    shape: SetShape,
    mask: Vec<bool>,
    weight: GridFunction,
    holder_exponent: Option<f64>,
}

impl WeightedSet {
    /// Rasterize a built-in set and sample the weight at the nodes.
    ///
    /// Fails when the set does not fit in the chart with margin `≥ R/2`.
    pub fn builtin(
        shape: SetShape,
        chart: Chart,
        weight: impl Fn(Complex64) -> f64,
    ) -> Result<Self> {
        if let SetShape::Annulus(r) = shape {
            if !(0.0 < r && r < 1.0) {
                return Err(Error::Config(format!(
                    "annulus inner radius must lie in (0,1), got {r}"
                )));
            }
        }
        let margin = chart.half_width() - shape.outer_extent();
        if shape != SetShape::WholeChart && margin < 0.5 * chart.half_width() {
            return Err(Error::Config(format!(
                "set '{}' leaves margin {margin:.3} < R/2 = {:.3} in the chart",
                shape.name(),
                0.5 * chart.half_width()
            )));
        }
        let h = chart.spacing();
        let mask: Vec<bool> = chart
            .iter_nodes()
            .map(|(_, _, z)| shape.contains(z, h))
            .collect();
        if !mask.iter().any(|&b| b) {
            return Err(Error::Config("set rasterizes to an empty mask".into()));
        }
        Ok(WeightedSet {
            chart,
            shape,
            mask,
            weight: GridFunction::from_fn(chart, weight),
            holder_exponent: None,
        })
    }

    pub fn with_holder_exponent(mut self, alpha: f64) -> Result<Self> {
        if !(0.0 < alpha && alpha <= 2.0) {
            return Err(Error::Config(format!(
                "Hölder exponent must lie in (0,2], got {alpha}"
            )));
        }
        self.holder_exponent = Some(alpha);
        Ok(self)
    }

    /// Replace the weight, keeping the mask.
    pub fn with_weight(&self, weight: impl Fn(Complex64) -> f64) -> Self {
        WeightedSet {
            weight: GridFunction::from_fn(self.chart, weight),
            ..self.clone()
        }
    }

    /// Replace the weight by a precomputed grid function.
    pub fn with_weight_grid(&self, weight: GridFunction) -> Result<Self> {
        if weight.chart() != self.chart {
            return Err(Error::Config("weight grid uses a different chart".into()));
        }
        let mut out = self.clone();
        out.weight = weight;
        Ok(out)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn shape(&self) -> SetShape {
        self.shape
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains_node(&self, j: usize, k: usize) -> bool {
        self.mask[self.chart.index(j, k)]
    }

    pub fn weight(&self) -> &GridFunction {
        &self.weight
    }

    pub fn holder_exponent(&self) -> Option<f64> {
        self.holder_exponent
    }

    pub fn node_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Nodes of the mask as chart coordinates.
    pub fn nodes(&self) -> Vec<Complex64> {
        self.chart
            .iter_nodes()
            .filter(|&(j, k, _)| self.contains_node(j, k))
            .map(|(_, _, z)| z)
            .collect()
    }

    /// Non-degeneracy proxy for a univariate section space of dimension
    /// `n_p`: the mask must contain at least `n_p` distinct chart values.
    /// (A single grid row is fine — distinct complex abscissae already give
    /// a nonsingular one-dimensional Vandermonde matrix.)
    pub fn check_degree_support(&self, n_p: usize) -> Result<()> {
        if self.node_count() < n_p {
            return Err(Error::Config(format!(
                "set has {} nodes, fewer than the section-space dimension {}",
                self.node_count(),
                n_p
            )));
        }
        Ok(())
    }

    /// Sup over mask nodes of `|w₁ - w₂|` for two weights on the same set.
    pub fn weight_sup_diff(&self, other: &WeightedSet) -> f64 {
        let mut sup: f64 = 0.0;
        for (j, k, _) in self.chart.iter_nodes() {
            if self.contains_node(j, k) {
                sup = sup.max((self.weight.get(j, k) - other.weight.get(j, k)).abs());
            }
        }
        sup
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_node_count_matches_area() {
        let chart = Chart::new(2.0, 128).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        // ~ π/h² = π(M/2)²·4 nodes
        let expected = std::f64::consts::PI / chart.spacing().powi(2);
        let got = set.node_count() as f64;
        assert!(
            (got - expected).abs() / expected < 0.01,
            "expected ≈{expected}, got {got}"
        );
    }

    #[test]
    fn interval_is_one_row() {
        let chart = Chart::new(2.0, 32).unwrap();
        let set = WeightedSet::builtin(SetShape::Interval, chart, |_| 0.0).unwrap();
        for (j, k, z) in chart.iter_nodes() {
            let inside = set.contains_node(j, k);
            assert_eq!(inside, z.im == 0.0 && z.re.abs() <= 1.0);
        }
        assert_eq!(set.node_count(), 33);
    }

    #[test]
    fn margin_violation_is_config_error() {
        // R must be ≥ 2 at chart level already; an annulus in a tight chart
        // triggers the margin check instead.
        let chart = Chart::new(2.0, 16).unwrap();
        assert!(WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).is_ok());
        let err = Chart::new(1.2, 16);
        assert!(err.is_err());
    }

    #[test]
    fn refining_never_flips_interior_nodes() {
        let coarse = Chart::new(2.0, 32).unwrap();
        let fine = Chart::new(2.0, 64).unwrap();
        for shape in [SetShape::UnitDisc, SetShape::Annulus(0.5), SetShape::Square] {
            let cs = WeightedSet::builtin(shape, coarse, |_| 0.0).unwrap();
            let fs = WeightedSet::builtin(shape, fine, |_| 0.0).unwrap();
            let h = coarse.spacing();
            let mut flipped = 0;
            for (j, k, z) in coarse.iter_nodes() {
                // strict interior: the whole coarse cell satisfies the inequality
                let r = z.norm();
                let interior = match shape {
                    SetShape::UnitDisc => r < 1.0 - h,
                    SetShape::Annulus(a) => a + h < r && r < 1.0 - h,
                    SetShape::Square => z.re.abs() < 1.0 - h && z.im.abs() < 1.0 - h,
                    _ => false,
                };
                if interior {
                    let (fj, fk) = fine.nearest(z);
                    if cs.contains_node(j, k) != fs.contains_node(fj, fk) {
                        flipped += 1;
                    }
                }
            }
            assert_eq!(flipped, 0, "shape {shape:?}");
        }
    }
}
