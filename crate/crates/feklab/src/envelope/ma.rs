//! Monge–Ampère measures of equilibrium potentials.

use super::solver::EnvelopeSolution;
use crate::error::{Error, Result};
use crate::model::{DiscreteMeasure, GridFunction, MeasureKind, ReferenceGeometry};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
/// Per-cell abort threshold for negative discrete densities.  Converged
/// envelopes stay above -1e-9; the margin absorbs 5-point-stencil
/// truncation near free-boundary kinks, while genuinely inadmissible
/// inputs overshoot it by orders of magnitude.
const NEGATIVE_CELL_TOL: f64 = 2e-7;

/// Grid-cell Monge–Ampère measure with its raw (pre-normalization) total.
#[derive(Clone, Debug)]
pub struct MAMeasure {
    measure: DiscreteMeasure,
    total: f64,
}

impl MAMeasure {
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

/// Signed cell masses of `dd^c u` at interior nodes: the five-point
/// Laplacian times `h²/(2π)`, so that `dd^c log|z-a|` carries unit mass.
/// No clamping — this is the raw diagnostic quantity.
pub fn laplacian_cells_signed(u: &GridFunction) -> Vec<(num_complex::Complex64, f64)> {
    let chart = u.chart();
    let n = chart.side();
    let h2 = chart.spacing().powi(2);
    let mut atoms = Vec::with_capacity((n - 2) * (n - 2));
    for j in 1..n - 1 {
        for k in 1..n - 1 {
            atoms.push((chart.node(j, k), u.laplacian_5pt(j, k) * h2 / TWO_PI));
        }
    }
    atoms
}

/// Clamped nonnegative cell masses; aborts on negatives past the stencil
/// tolerance.
fn laplacian_cells(u: &GridFunction) -> Result<Vec<(num_complex::Complex64, f64)>> {
    let mut atoms = laplacian_cells_signed(u);
    for (z, mass) in atoms.iter_mut() {
        if *mass < 0.0 {
            if *mass < -NEGATIVE_CELL_TOL {
                return Err(Error::Numeric(format!(
                    "negative discrete Monge–Ampère cell mass {mass:e} near {z}"
                )));
            }
            *mass = 0.0;
        }
    }
    Ok(atoms)
}

/// The Monge–Ampère measure of a converged envelope.
///
/// For compact sets the whole unit mass lives in the box; for whole-model
/// sets the analytic reference mass of the box is the target (the rest
/// sits beyond the chart).  A raw total further than 0.05 from the target
/// signals an under-resolved run and is reported as a consistency error.
pub fn ma_measure(sol: &EnvelopeSolution) -> Result<MAMeasure> {
    let atoms = laplacian_cells(sol.u())?;
    let measure = DiscreteMeasure::new(atoms, MeasureKind::GridCells)?;
    let total = measure.total();
    let expected = if sol.edge_masked() {
        crate::model::fs_square_mass(sol.u().chart().half_width())
    } else {
        1.0
    };
    if (total - expected).abs() > 0.05 {
        return Err(Error::Consistency(format!(
            "Monge–Ampère total mass {total} is too far from the reference {expected}; refine the grid"
        )));
    }
    Ok(MAMeasure { measure, total })
}

/// Equilibrium measure: envelope → Monge–Ampère → exact normalization.
pub fn mu_eq_from_solution(sol: &EnvelopeSolution) -> Result<DiscreteMeasure> {
    ma_measure(sol)?.measure().normalized()
}

/// Normalized Monge–Ampère measure of a *bounded admissible weight* `ψ` on
/// the whole model: cell masses of `dd^c ψ + ω₀` (no envelope solve).  The
/// reference form contributes its analytic density, so the grid total is
/// `1 - (tail mass)` plus discretization error; the result is normalized
/// exactly.
pub fn nma_of_fs_weight(psi: &GridFunction, geom: &ReferenceGeometry) -> Result<DiscreteMeasure> {
    let chart = psi.chart();
    if chart != geom.chart() {
        return Err(Error::Config("weight and geometry charts differ".into()));
    }
    let n = chart.side();
    let h2 = chart.spacing().powi(2);
    let mut atoms = Vec::with_capacity((n - 2) * (n - 2));
    for j in 1..n - 1 {
        for k in 1..n - 1 {
            let z = chart.node(j, k);
            let mut mass =
                psi.laplacian_5pt(j, k) * h2 / TWO_PI + crate::model::fs_density_at(z) * h2;
            if mass < 0.0 {
                if mass < -NEGATIVE_CELL_TOL {
                    return Err(Error::Numeric(format!(
                        "weight is not admissible: cell mass {mass:e} at node ({j},{k})"
                    )));
                }
                mass = 0.0;
            }
            atoms.push((z, mass));
        }
    }
    DiscreteMeasure::new(atoms, MeasureKind::GridCells)?.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::solver::{envelope, EnvelopeParams};
    use crate::model::{Chart, SetShape, WeightedSet};
    use num_complex::Complex64;

    #[test]
    fn point_charge_has_unit_mass() {
        // dd^c log|z - a| must integrate to 1 on the grid
        let chart = Chart::new(2.0, 64).unwrap();
        let a = Complex64::new(0.31, -0.17); // off-node
        let g = GridFunction::from_fn(chart, |z| (z - a).norm().ln());
        let total: f64 = laplacian_cells_signed(&g).iter().map(|&(_, m)| m).sum();
        assert!((total - 1.0).abs() < 1e-4, "total {total}");
    }

    #[test]
    fn disc_equilibrium_measure_sits_on_the_circle() {
        let chart = Chart::new(4.0, 96).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        let sol = envelope(&set, &EnvelopeParams::default()).unwrap();
        let ma = ma_measure(&sol).unwrap();
        assert!((ma.total() - 1.0).abs() < 10.0 * chart.spacing());
        let mu = mu_eq_from_solution(&sol).unwrap();
        let h = chart.spacing();
        let near: f64 = mu
            .atoms()
            .iter()
            .filter(|&&(z, _)| (z.norm() - 1.0).abs() <= 3.0 * h)
            .map(|&(_, m)| m)
            .sum();
        assert!(near >= 0.95, "mass near circle: {near}");
    }

    #[test]
    fn whole_chart_nma_of_smooth_weight() {
        // ψ = λ·(1 - 1/(1+|z|²)) has dd^cψ + ω₀ ≥ (1-2λ)ω₀ > 0 and an
        // analytically known density.
        let chart = Chart::new(4.0, 96).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let lambda = 0.3;
        let psi = GridFunction::from_fn(chart, |z| lambda * (1.0 - 1.0 / (1.0 + z.norm_sqr())));
        let mu = nma_of_fs_weight(&psi, &geom).unwrap();
        // compare cell mass against the analytic density on a probe ball
        let exact_density = |z: Complex64| {
            let r2 = z.norm_sqr();
            crate::model::fs_density_at(z)
                * (1.0 + 2.0 * lambda * (1.0 - r2) / (1.0 + r2))
        };
        let h2 = chart.spacing().powi(2);
        let mut l1 = 0.0;
        for &(z, m) in mu.atoms() {
            l1 += (m - exact_density(z) * h2).abs();
        }
        assert!(l1 < 10.0 * chart.spacing(), "L1 error {l1}");
    }
}
