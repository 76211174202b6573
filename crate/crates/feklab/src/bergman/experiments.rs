//! Degree ladders: density convergence for positively curved weights and
//! Bernstein–Markov growth of sup ρ_p.

use super::density::{bergman_basis, rho_at};
use crate::envelope::EnvelopeSolution;
use crate::error::{Error, Result};
use crate::metrics::{fit_rate, RateFit};
use crate::model::{fs_density_at, GridFunction, ReferenceGeometry};
use crate::polyspace::{GramQuadrature, WeightedNormContext};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// A bounded weight with a closed-form Laplacian.
///
/// The curvature ratio `ω/ω₀` entering the density comparison is computed
/// from the *analytic* Laplacian, never from grid differences: second
/// differences of a sampled weight carry `O(h²‖ψ‖₄)` noise comparable to
/// the measured signal.
#[derive(Clone)]
pub struct AnalyticWeight {
    pub f: Arc<dyn Fn(Complex64) -> f64 + Send + Sync>,
    pub laplacian: Arc<dyn Fn(Complex64) -> f64 + Send + Sync>,
    /// Radial profile `ψ(z) = g(|z|)` when the weight is circle-invariant;
    /// enables the exact Gram tail.
    pub radial: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl AnalyticWeight {
    pub fn new(
        f: impl Fn(Complex64) -> f64 + Send + Sync + 'static,
        laplacian: impl Fn(Complex64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticWeight {
            f: Arc::new(f),
            laplacian: Arc::new(laplacian),
            radial: None,
        }
    }

    pub fn with_radial_profile(
        mut self,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.radial = Some(Arc::new(g));
        self
    }

    /// Curvature ratio `(dd^c ψ + ω₀)/ω₀` at a point.
    pub fn curvature_ratio(&self, z: Complex64) -> f64 {
        let ddc = (self.laplacian)(z) / (2.0 * std::f64::consts::PI);
        1.0 + ddc / fs_density_at(z)
    }
}

#[derive(Clone, Debug)]
pub struct DensityConvergence {
    /// `(p, ‖ρ_p/N_p - ω/ω₀‖_{L¹(μ⁰ restricted to the box)})`.
    pub rows: Vec<(usize, f64)>,
    pub fit: RateFit,
    /// The discretely certified curvature lower bound.
    pub zeta: f64,
}

/// Density-convergence experiment: for each degree, compare the normalized
/// Bergman density of `(μ⁰, ψ)` with the curvature ratio `ω/ω₀` in
/// `L¹(μ⁰)` (grid part), and fit a log-log rate.
///
/// The curvature bound `dd^cψ + ω₀ ≥ ζ·ω₀` is certified discretely; if the
/// certified ζ falls below `zeta_min`, the run aborts naming the worst
/// node.
pub fn density_convergence_experiment(
    geom: &ReferenceGeometry,
    weight: &AnalyticWeight,
    p_list: &[usize],
    zeta_min: f64,
) -> Result<DensityConvergence> {
    let chart = geom.chart();
    // certify ζ at every node
    let mut zeta = f64::INFINITY;
    let mut worst = Complex64::ZERO;
    for (_, _, z) in chart.iter_nodes() {
        let r = weight.curvature_ratio(z);
        if r < zeta {
            zeta = r;
            worst = z;
        }
    }
    if zeta < zeta_min {
        return Err(Error::Config(format!(
            "curvature ratio {zeta:.4} at z = {worst} is below the required ζ ≥ {zeta_min}"
        )));
    }
    let f = weight.f.clone();
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let fc = f.clone();
        let ctx = WeightedNormContext::fs_fn(p, move |z| fc(z));
        let basis = match &weight.radial {
            Some(g) => {
                let gg = g.clone();
                bergman_basis(
                    &GramQuadrature::FsGlobalRadial {
                        geom,
                        psi_radial: &move |r| gg(r),
                    },
                    &ctx,
                )?
            }
            None => bergman_basis(&GramQuadrature::FsGlobal(geom), &ctx)?,
        };
        let n_p = (p + 1) as f64;
        let h2 = chart.spacing().powi(2);
        let n = chart.side();
        let err: f64 = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (j, k) = chart.coords(idx);
                let z = chart.node(j, k);
                let rho = rho_at(&basis, &ctx, z);
                (rho / n_p - weight.curvature_ratio(z)).abs() * fs_density_at(z) * h2
            })
            .sum();
        rows.push((p, err));
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|&(p, e)| (p as f64, e)).collect();
    let fit = fit_rate(&pairs)?;
    Ok(DensityConvergence { rows, fit, zeta })
}

#[derive(Clone, Debug)]
pub struct BmFit {
    /// `(p, sup_grid ρ_p)`.
    pub rows: Vec<(usize, f64)>,
    /// Least-squares slope of `log sup` against `log p`.
    pub slope: f64,
    /// Smallest `B` with `sup ρ_p ≤ B·p^B` over the tested range.
    pub b_hat: f64,
}

/// Growth of `sup_X ρ_p(μ⁰, u)` for the equilibrium weight of a set: the
/// sup-norm/L²-norm comparison constant of the weighted polynomial space.
pub fn bernstein_markov_exponent(
    sol: &EnvelopeSolution,
    geom: &ReferenceGeometry,
    p_list: &[usize],
) -> Result<BmFit> {
    let chart = geom.chart();
    let u: Arc<GridFunction> = Arc::new(sol.u().clone());
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let ctx = WeightedNormContext::flat_grid(p, u.clone());
        let basis = bergman_basis(&GramQuadrature::FsGlobal(geom), &ctx)?;
        let n = chart.side();
        let sup = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (j, k) = chart.coords(idx);
                rho_at(&basis, &ctx, chart.node(j, k))
            })
            .reduce(|| 0.0, f64::max);
        rows.push((p, sup));
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|&(p, s)| (p as f64, s)).collect();
    let fit = fit_rate(&pairs)?;
    // smallest B with log B + B log p ≥ log sup_p for every tested p
    let feasible = |b: f64| -> bool {
        rows.iter()
            .all(|&(p, s)| b.ln() + b * (p as f64).ln() >= s.ln())
    };
    let mut lo = 1e-3;
    let mut hi = 64.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BmFit {
        rows,
        slope: fit.slope,
        b_hat: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Chart;

    fn radial_weight(lambda: f64) -> AnalyticWeight {
        // ψ = λ(1 - 1/(1+|z|²)): Δψ = λ·4(1-r²)/(1+r²)³,
        // curvature ratio 1 + 2λ(1-r²)/(1+r²) ≥ 1 - 2λ
        AnalyticWeight::new(
            move |z| lambda * (1.0 - 1.0 / (1.0 + z.norm_sqr())),
            move |z| {
                let r2 = z.norm_sqr();
                lambda * 4.0 * (1.0 - r2) / (1.0 + r2).powi(3)
            },
        )
        .with_radial_profile(move |r| lambda * (1.0 - 1.0 / (1.0 + r * r)))
    }

    #[test]
    fn flat_weight_has_tiny_error_at_every_degree() {
        let chart = Chart::new(4.0, 64).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let w = radial_weight(0.0);
        let out =
            density_convergence_experiment(&geom, &w, &[4, 6, 8, 12], 0.99).unwrap();
        for &(p, e) in &out.rows {
            assert!(e >= 0.0, "negative L1 error");
            assert!(e <= 1e-3, "p={p}: err {e}");
        }
        assert!((out.zeta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn curvature_certificate_names_violations() {
        let chart = Chart::new(4.0, 32).unwrap();
        let geom = ReferenceGeometry::new(chart);
        // λ = 0.6 drives the ratio down to -0.2 < 0 at large |z|
        let w = radial_weight(0.6);
        let err = density_convergence_experiment(&geom, &w, &[4, 8], 0.5);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn bm_exponent_is_one_for_the_whole_model() {
        // K = X, ψ = 0: the envelope is ρ₀ itself and sup ρ_p = p+1
        let chart = Chart::new(4.0, 48).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let set = crate::model::WeightedSet::builtin(
            crate::model::SetShape::WholeChart,
            chart,
            crate::model::fs_potential_at,
        )
        .unwrap();
        let sol = crate::envelope::envelope(&set, &crate::envelope::EnvelopeParams::default())
            .unwrap();
        // the slope of log(p+1) vs log p only approaches 1 once p is large
        let fit = bernstein_markov_exponent(&sol, &geom, &[16, 32, 64, 128]).unwrap();
        for &(p, s) in &fit.rows {
            // coarse grid (M=48): quadrature error a few parts in 10³
            assert!(
                (s - (p + 1) as f64).abs() / ((p + 1) as f64) < 5e-3,
                "p={p}: sup {s}"
            );
        }
        assert!((fit.slope - 1.0).abs() < 0.05, "slope {}", fit.slope);
        assert!(fit.b_hat < 4.0);
    }
}

#[cfg(test)]
mod probes {
    use super::*;
    use crate::model::Chart;
    use crate::polyspace::GramQuadrature;

    #[test]
    #[ignore = "criterion-5 probe"]
    fn balanced_and_tue4_scaling() {
        let chart = Chart::new(4.0, 128).unwrap();
        let geom = ReferenceGeometry::new(chart);
        for p in [4usize, 8, 16, 32] {
            let ctx = WeightedNormContext::fs_unweighted(p);
            let basis = bergman_basis(&GramQuadrature::FsGlobal(&geom), &ctx).unwrap();
            let n = chart.side();
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for idx in 0..n * n {
                let (j, k) = chart.coords(idx);
                let r = rho_at(&basis, &ctx, chart.node(j, k));
                lo = lo.min(r);
                hi = hi.max(r);
            }
            let n_p = (p + 1) as f64;
            eprintln!(
                "balanced p={p}: rel dev [{:.2e}, {:.2e}]",
                lo / n_p - 1.0,
                hi / n_p - 1.0
            );
        }
        let w = AnalyticWeight::new(
            |z| 0.2 * (1.0 - 1.0 / (1.0 + z.norm_sqr())),
            |z| {
                let r2 = z.norm_sqr();
                0.2 * 4.0 * (1.0 - r2) / (1.0 + r2).powi(3)
            },
        )
        .with_radial_profile(|r| 0.2 * (1.0 - 1.0 / (1.0 + r * r)));
        let t0 = std::time::Instant::now();
        let out = density_convergence_experiment(&geom, &w, &[8, 16, 32, 64], 0.5).unwrap();
        eprintln!(
            "tue4: zeta {:.3}, rows {:?}, slope {:.3} ({:.1}s)",
            out.zeta,
            out.rows,
            out.fit.slope,
            t0.elapsed().as_secs_f64()
        );
    }
}

#[cfg(test)]
mod probes2 {
    use super::*;
    use crate::model::Chart;
    use crate::polyspace::GramQuadrature;

    #[test]
    #[ignore = "error localization probe"]
    fn tue4_error_localization() {
        let chart = Chart::new(4.0, 128).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let w = AnalyticWeight::new(
            |z| 0.2 * (1.0 - 1.0 / (1.0 + z.norm_sqr())),
            |z| {
                let r2 = z.norm_sqr();
                0.2 * 4.0 * (1.0 - r2) / (1.0 + r2).powi(3)
            },
        );
        for p in [32usize, 64] {
            let f = w.f.clone();
            let ctx = WeightedNormContext::fs_fn(p, move |z| f(z));
            let basis = bergman_basis(&GramQuadrature::FsGlobal(&geom), &ctx).unwrap();
            let n = chart.side();
            let n_p = (p + 1) as f64;
            let h2 = chart.spacing().powi(2);
            let mut shells = [0.0f64; 4]; // |z|<1, 1..2, 2..4, >4
            for idx in 0..n * n {
                let (j, k) = chart.coords(idx);
                let z = chart.node(j, k);
                let rho = rho_at(&basis, &ctx, z);
                let e = (rho / n_p - w.curvature_ratio(z)).abs() * fs_density_at(z) * h2;
                let s = if z.norm() < 1.0 {
                    0
                } else if z.norm() < 2.0 {
                    1
                } else if z.norm() <= 4.0 {
                    2
                } else {
                    3
                };
                shells[s] += e;
            }
            eprintln!("p={p}: shell errors {shells:?}");
        }
    }
}
