//! The reference Fubini–Study geometry on the chart.
//!
//! The reference Kähler form `ω₀` has the local potential
//! `ρ₀(z) = ½·log(1 + |z|²)` and, with the convention
//! `dd^c = (√-1/π)·∂∂̄` (so that `dd^c log|z - a|` is a unit Dirac mass),
//! the Lebesgue density `1/(π(1+|z|²)²)`.  Its total mass over the whole
//! projective line is exactly 1.

use super::chart::Chart;
use super::grid::GridFunction;
use super::measure::{DiscreteMeasure, MeasureKind};
use crate::util::gauss_legendre;
use num_complex::Complex64;

/// Local potential `ρ₀(z) = ½ log(1 + |z|²)`.
pub fn fs_potential_at(z: Complex64) -> f64 {
    0.5 * (1.0 + z.norm_sqr()).ln()
}

/// Density of `ω₀` against planar Lebesgue measure: `1/(π(1+|z|²)²)`.
pub fn fs_density_at(z: Complex64) -> f64 {
    let s = 1.0 + z.norm_sqr();
    1.0 / (std::f64::consts::PI * s * s)
}

/// `ω₀`-mass of the centered disc `|z| ≤ r`, in closed form: `r²/(1+r²)`.
pub fn fs_disc_mass(r: f64) -> f64 {
    r * r / (1.0 + r * r)
}

/// `ω₀`-mass of the square `[-a, a]²`: closed-form inner integral, Gauss
/// panels outside, accurate to ~1e-14.
pub fn fs_square_mass(a: f64) -> f64 {
    let inner = |x: f64| -> f64 {
        let c2 = 1.0 + x * x;
        let c = c2.sqrt();
        (a / (c2 * (c2 + a * a)) + (a / c).atan() / (c2 * c)) / std::f64::consts::PI
    };
    let (nodes, weights) = gauss_legendre(48);
    let panels = 8;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = -a + 2.0 * a * p as f64 / panels as f64;
        let hi = -a + 2.0 * a * (p + 1) as f64 / panels as f64;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (&x, &w) in nodes.iter().zip(&weights) {
            total += w * half * inner(mid + half * x);
        }
    }
    total
}

/// Chart realization of the reference geometry.
#[derive(Clone, Debug)]
pub struct ReferenceGeometry {
    chart: Chart,
    fs_potential: GridFunction,
    fs_density: GridFunction,
    total_mass: f64,
}

impl ReferenceGeometry {
    pub fn new(chart: Chart) -> Self {
        ReferenceGeometry {
            chart,
            fs_potential: GridFunction::from_fn(chart, fs_potential_at),
            fs_density: GridFunction::from_fn(chart, fs_density_at),
            total_mass: 1.0,
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn fs_potential(&self) -> &GridFunction {
        &self.fs_potential
    }

    pub fn fs_density(&self) -> &GridFunction {
        &self.fs_density
    }

    /// Total mass of `ω₀` on the projective line (normalized to 1).
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// `ω₀`-mass of the rectangle `[-a, a]²`; see [`fs_square_mass`].
    pub fn square_mass(&self, a: f64) -> f64 {
        fs_square_mass(a)
    }

    /// `ω₀`-mass outside the region covered by the grid cells.
    ///
    /// The midpoint rule over all nodes covers `[-R-h/2, R+h/2]²`, so the
    /// complementary analytic mass uses that enlarged square.
    pub fn exterior_mass(&self) -> f64 {
        let a = self.chart.half_width() + 0.5 * self.chart.spacing();
        self.total_mass - self.square_mass(a)
    }

    /// The probability measure `μ⁰` restricted to grid cells.  The small
    /// mass outside the box is handled analytically where it matters
    /// (Gram-matrix tails); this grid part alone is *not* a probability
    /// measure.
    pub fn mu0_cells(&self) -> DiscreteMeasure {
        let h2 = self.chart.spacing().powi(2);
        let atoms = self
            .chart
            .iter_nodes()
            .map(|(_, _, z)| (z, fs_density_at(z) * h2))
            .collect();
        DiscreteMeasure::new(atoms, MeasureKind::GridCells).expect("density is nonnegative")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_vanishes_at_origin() {
        assert_eq!(fs_potential_at(Complex64::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn density_ratio_origin_vs_one() {
        let r = fs_density_at(Complex64::new(0.0, 0.0)) / fs_density_at(Complex64::new(1.0, 0.0));
        assert!((r - 4.0).abs() < 1e-6);
    }

    #[test]
    fn unit_disc_carries_half_the_mass() {
        // exact radial integral: ∫_{|z|≤1} ω₀ = 1/2
        assert!((fs_disc_mass(1.0) - 0.5).abs() < 1e-15);
        let chart = Chart::new(2.0, 128).unwrap();
        let h2 = chart.spacing().powi(2);
        let grid_disc: f64 = chart
            .iter_nodes()
            .filter(|&(_, _, z)| z.norm_sqr() <= 1.0)
            .map(|(_, _, z)| fs_density_at(z) * h2)
            .sum();
        let tol = 10.0 * chart.spacing().powi(2);
        assert!((grid_disc - 0.5).abs() < tol, "grid mass {grid_disc}");
    }

    #[test]
    fn grid_plus_exterior_is_one() {
        for m in [32, 64, 128] {
            let chart = Chart::new(2.0, m).unwrap();
            let geom = ReferenceGeometry::new(chart);
            let grid = geom.mu0_cells().total();
            let total = grid + geom.exterior_mass();
            let rel = (total - 1.0).abs();
            assert!(
                rel < 10.0 * chart.spacing().powi(2),
                "M={m}: total {total}, rel err {rel}"
            );
        }
    }
}
