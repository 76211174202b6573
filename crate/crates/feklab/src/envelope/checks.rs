//! Structural checks on equilibrium potentials: the tautological maximum
//! principle, 1-Lipschitz stability of the projection, and the ball-mass
//! Hölder diagnostic.

use super::solver::{envelope, EnvelopeParams, EnvelopeSolution};
use crate::error::{Error, Result};
use crate::model::{GridFunction, WeightedSet};
use num_complex::Complex64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// How to certify that a comparison potential is admissible (subharmonic on
/// the chart).
pub enum PshCheck {
    /// The caller certifies admissibility analytically (e.g. `log|f|` for a
    /// polynomial `f`, or an envelope output).
    Certified,
    /// Verify cell masses of the discrete Laplacian at every interior node,
    /// skipping nodes within `guard` of the listed logarithmic poles where
    /// the 5-point stencil cannot resolve the singularity.
    Discrete {
        tol: f64,
        poles: Vec<Complex64>,
        guard: f64,
    },
}

/// Tautological maximum principle for an admissible chart potential `v`
/// against the envelope `s` of `(K, φ)`:
///
/// `sup_K(v-φ) = sup_K(v-s) = sup_grid(v-s)`.
///
/// Returns the three suprema; the caller asserts pairwise agreement at its
/// tolerance.
pub fn max_principle_check(
    v: &GridFunction,
    set: &WeightedSet,
    sol: &EnvelopeSolution,
    check: PshCheck,
) -> Result<(f64, f64, f64)> {
    let chart = set.chart();
    if v.chart() != chart {
        return Err(Error::Config("potential lives on a different chart".into()));
    }
    if let PshCheck::Discrete { tol, poles, guard } = &check {
        let h2 = chart.spacing().powi(2);
        for (j, k, z) in chart.iter_nodes() {
            if !chart.is_interior(j, k) {
                continue;
            }
            if poles.iter().any(|&p| (z - p).norm() <= *guard) {
                continue;
            }
            let mass = v.laplacian_5pt(j, k) * h2 / TWO_PI;
            if mass < -*tol {
                return Err(Error::Config(format!(
                    "comparison potential is not admissible: cell mass {mass:e} at ({j},{k})"
                )));
            }
        }
    }
    let mut sup_k_phi = f64::NEG_INFINITY;
    let mut sup_k_env = f64::NEG_INFINITY;
    let mut sup_x_env = f64::NEG_INFINITY;
    for (j, k, _) in chart.iter_nodes() {
        let vv = v.get(j, k);
        if !vv.is_finite() {
            continue;
        }
        let d_env = vv - sol.u().get(j, k);
        sup_x_env = sup_x_env.max(d_env);
        if set.contains_node(j, k) {
            sup_k_env = sup_k_env.max(d_env);
            sup_k_phi = sup_k_phi.max(vv - set.weight().get(j, k));
        }
    }
    Ok((sup_k_phi, sup_k_env, sup_x_env))
}

/// 1-Lipschitz stability of the equilibrium projection:
/// `sup_grid |s₁ - s₂| ≤ sup_K |φ₁ - φ₂|`.
///
/// Returns `(lhs, rhs)`; both envelopes are solved internally.
pub fn lipschitz_projection_check(
    set1: &WeightedSet,
    set2: &WeightedSet,
    params: &EnvelopeParams,
) -> Result<(f64, f64)> {
    if set1.chart() != set2.chart() || set1.mask() != set2.mask() {
        return Err(Error::Config(
            "Lipschitz check needs two weights on the same set".into(),
        ));
    }
    let sol1 = envelope(set1, params)?;
    let sol2 = envelope(set2, params)?;
    let mut lhs: f64 = 0.0;
    for (a, b) in sol1.u().values().iter().zip(sol2.u().values()) {
        lhs = lhs.max((a - b).abs());
    }
    Ok((lhs, set1.weight_sup_diff(set2)))
}

/// Ball-mass scaling diagnostic for Hölder regularity.
#[derive(Clone, Debug)]
pub struct HolderDiagnostic {
    /// Fitted exponent per center (`None` where all balls were empty).
    pub per_center: Vec<Option<f64>>,
    /// Minimum over centers: the conservative global estimate.
    pub alpha_hat: f64,
}

/// Least-squares slope of `log ‖Δu‖_{B(x,t)}` against `log t` per center;
/// in the plane the mass scales like `t^α̂` for a `C^α̂`-regular potential.
/// Radii must satisfy `4h ≤ t ≤ R/4`.
pub fn holder_mass_diagnostic(
    u: &GridFunction,
    centers: &[Complex64],
    radii: &[f64],
) -> Result<HolderDiagnostic> {
    let chart = u.chart();
    let h = chart.spacing();
    if radii.len() < 2 {
        return Err(Error::Config("need at least two radii".into()));
    }
    for &t in radii {
        if t < 4.0 * h || t > chart.half_width() / 4.0 {
            return Err(Error::Config(format!(
                "radius {t} outside the resolvable window [{}, {}]",
                4.0 * h,
                chart.half_width() / 4.0
            )));
        }
    }
    // cell masses of |Δu|
    let cells: Vec<(Complex64, f64)> = super::ma::laplacian_cells_signed(u)
        .into_iter()
        .filter(|&(_, m)| m.is_finite() && m != 0.0)
        .map(|(z, m)| (z, m.abs()))
        .collect();
    let mut per_center = Vec::with_capacity(centers.len());
    let mut alpha_hat = f64::INFINITY;
    for &x in centers {
        let mut pts = Vec::new();
        for &t in radii {
            let mass: f64 = cells
                .iter()
                .filter(|&&(z, _)| (z - x).norm() <= t)
                .map(|&(_, m)| m)
                .sum();
            if mass > 0.0 {
                pts.push((t.ln(), mass.ln()));
            }
        }
        if pts.len() < 2 {
            per_center.push(None); // skipped: empty balls
            continue;
        }
        let slope = least_squares_slope(&pts);
        per_center.push(Some(slope));
        alpha_hat = alpha_hat.min(slope);
    }
    if !alpha_hat.is_finite() {
        return Err(Error::Numeric("all centers had empty balls".into()));
    }
    Ok(HolderDiagnostic {
        per_center,
        alpha_hat,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Chart, SetShape};

    #[test]
    fn max_principle_self_test() {
        let chart = Chart::new(4.0, 48).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        let sol = envelope(&set, &EnvelopeParams::default()).unwrap();
        // v = the envelope itself
        let (a, b, c) =
            max_principle_check(sol.u(), &set, &sol, PshCheck::Certified).unwrap();
        assert!(b.abs() < 1e-12 && c.abs() < 1e-12);
        assert!(a <= 1e-12 && a > -5.0 * chart.spacing());
        assert!((a - b).abs() < 5.0 * chart.spacing() && (b - c).abs() < 1e-12);
    }

    #[test]
    fn translation_equivariance_of_projection() {
        let chart = Chart::new(4.0, 40).unwrap();
        let set1 = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        let set2 = set1.with_weight(|_| 0.7);
        let (lhs, rhs) =
            lipschitz_projection_check(&set1, &set2, &EnvelopeParams::default()).unwrap();
        assert!((rhs - 0.7).abs() < 1e-12);
        assert!((lhs - 0.7).abs() < 1e-6, "lhs {lhs}");
    }

    #[test]
    fn holder_diagnostic_on_circle_mass() {
        // Green function of the disc: boundary mass ∝ arclength, α̂ ≈ 1
        let chart = Chart::new(4.0, 192).unwrap();
        let g = GridFunction::from_fn(chart, |z| z.norm().max(1.0).ln());
        let centers = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-(0.5f64.sqrt()), 0.5f64.sqrt()),
        ];
        let radii: Vec<f64> = (0..6).map(|i| 0.4 * 0.8f64.powi(i)).collect();
        let diag = holder_mass_diagnostic(&g, &centers, &radii).unwrap();
        assert!(
            diag.alpha_hat > 0.8 && diag.alpha_hat < 1.2,
            "alpha_hat {}",
            diag.alpha_hat
        );
    }

    #[test]
    fn holder_diagnostic_saturates_on_smooth_mass() {
        let chart = Chart::new(4.0, 192).unwrap();
        let g = GridFunction::from_fn(chart, |z| z.norm_sqr());
        let centers = [Complex64::new(0.2, -0.3)];
        let radii: Vec<f64> = (0..6).map(|i| 0.4 * 0.8f64.powi(i)).collect();
        let diag = holder_mass_diagnostic(&g, &centers, &radii).unwrap();
        assert!(diag.alpha_hat >= 1.5, "alpha_hat {}", diag.alpha_hat);
    }

    #[test]
    fn holder_diagnostic_flags_point_mass() {
        let chart = Chart::new(4.0, 192).unwrap();
        let a = Complex64::new(0.1, 0.05);
        let g = GridFunction::from_fn(chart, |z| {
            let d = (z - a).norm();
            if d == 0.0 { -30.0 } else { d.ln() }
        });
        let radii: Vec<f64> = (0..6).map(|i| 0.4 * 0.8f64.powi(i)).collect();
        let diag = holder_mass_diagnostic(&g, &[a], &radii).unwrap();
        assert!(diag.alpha_hat.abs() < 0.15, "alpha_hat {}", diag.alpha_hat);
    }
}
