//! The normalized log-volume functional of weighted unit balls.
//!
//! Only differences of `L_p` values are intrinsically defined (the volume
//! normalization cancels); the absolute values reported here follow the
//! convention `L_p(μ⁰, ψ=0) = 0`.

use crate::bergman::{bergman_basis, rho_at};
use crate::envelope::EnvelopeSolution;
use crate::error::Result;
use crate::model::ReferenceGeometry;
use crate::polyspace::{gram, GramQuadrature, WeightedNormContext};
use rayon::prelude::*;

/// `L_p(μ, w₁) - L_p(μ, w₂) = -(1/(2pN_p))·log det G`, where `G` is the
/// Gram under `(μ, p·w₁)` of a basis orthonormal under `(μ, p·w₂)` — the
/// complex unit-ball volume scales as `det(G)^{-1}`.
pub fn l_p_difference(
    quad: &GramQuadrature,
    ctx1: &WeightedNormContext,
    ctx2: &WeightedNormContext,
) -> Result<f64> {
    let p = ctx1.degree() as f64;
    let n_p = ctx1.dim() as f64;
    let on2 = bergman_basis(quad, ctx2)?;
    let g12 = gram(&on2, quad, ctx1)?;
    Ok(-g12.log_det()? / (2.0 * p * n_p))
}

/// Absolute `L_p(μ⁰, ψ)` under the zero-weight normalization.
pub fn l_p_normalized(
    geom: &ReferenceGeometry,
    psi_ctx: &WeightedNormContext,
) -> Result<f64> {
    let zero = WeightedNormContext::fs_unweighted(psi_ctx.degree());
    l_p_difference(&GramQuadrature::FsGlobal(geom), psi_ctx, &zero)
}

/// Two-sided bracket for the sup-norm functional `L_p(K, φ)`:
/// `upper = L_p(μ⁰, P_Kφ)` and `lower = upper - (1/2p)·log sup ρ_p`,
/// from the norm comparison `‖s‖_{L²(μ⁰)} ≤ ‖s‖_{L^∞} ≤ e^{p·c_p}·‖s‖_{L²}`.
pub fn l_p_k_bracket(
    geom: &ReferenceGeometry,
    sol: &EnvelopeSolution,
    p: usize,
) -> Result<(f64, f64)> {
    let u = std::sync::Arc::new(sol.u().clone());
    let ctx = WeightedNormContext::flat_grid(p, u);
    let upper = l_p_normalized(geom, &ctx)?;
    let basis = bergman_basis(&GramQuadrature::FsGlobal(geom), &ctx)?;
    let chart = geom.chart();
    let n = chart.side();
    let sup_rho = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = chart.coords(idx);
            rho_at(&basis, &ctx, chart.node(j, k))
        })
        .reduce(|| 0.0, f64::max);
    let lower = upper - sup_rho.ln() / (2.0 * p as f64);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Chart, DiscreteMeasure};
    use num_complex::Complex64;

    fn circle_measure(count: usize) -> DiscreteMeasure {
        let pts: Vec<Complex64> = (0..count)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / count as f64))
            .collect();
        DiscreteMeasure::uniform_on(&pts)
    }

    #[test]
    fn identical_weights_give_zero() {
        let mu = circle_measure(32);
        let p = 4;
        let ctx = WeightedNormContext::fs_unweighted(p);
        let d = l_p_difference(&GramQuadrature::Atoms(&mu), &ctx, &ctx).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn constant_shift_adds_the_constant() {
        let mu = circle_measure(48);
        let p = 5;
        let c = 0.37;
        let ctx1 = WeightedNormContext::fs_fn(p, move |_| c);
        let ctx2 = WeightedNormContext::fs_unweighted(p);
        let d = l_p_difference(&GramQuadrature::Atoms(&mu), &ctx1, &ctx2).unwrap();
        assert!((d - c).abs() < 1e-10, "got {d}");
    }

    #[test]
    fn antisymmetry() {
        let mu = circle_measure(64);
        let p = 6;
        let ctx1 = WeightedNormContext::fs_fn(p, |z| 0.2 * z.re);
        let ctx2 = WeightedNormContext::fs_fn(p, |z| -0.1 * z.im * z.im);
        let a = l_p_difference(&GramQuadrature::Atoms(&mu), &ctx1, &ctx2).unwrap();
        let b = l_p_difference(&GramQuadrature::Atoms(&mu), &ctx2, &ctx1).unwrap();
        assert!((a + b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn normalization_vanishes_at_zero_weight() {
        let chart = Chart::new(4.0, 64).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let ctx = WeightedNormContext::fs_unweighted(6);
        let v = l_p_normalized(&geom, &ctx).unwrap();
        assert!(v.abs() < 1e-12, "got {v}");
    }

    #[test]
    fn concavity_along_segments() {
        // t ↦ L_p(μ, t·ψ₁ + (1-t)·ψ₂) is concave: second difference ≤ 0
        let mu = circle_measure(48);
        let p = 5;
        let psi1 = |z: Complex64| 0.3 * (z.re * 1.3).sin();
        let psi2 = |z: Complex64| 0.2 * z.norm_sqr() / (1.0 + z.norm_sqr());
        let zero = WeightedNormContext::fs_unweighted(p);
        let at = |t: f64| {
            let ctx = WeightedNormContext::fs_fn(p, move |z| {
                t * psi1(z) + (1.0 - t) * psi2(z)
            });
            l_p_difference(&GramQuadrature::Atoms(&mu), &ctx, &zero).unwrap()
        };
        let (a, m, b) = (at(0.0), at(0.5), at(1.0));
        assert!(a + b - 2.0 * m <= 1e-8, "second difference {}", a + b - 2.0 * m);
    }

    #[test]
    fn whole_model_bracket_matches_balanced_density() {
        // K = X, ψ = 0: bracket is [-(1/2p)·log(p+1), 0]
        let chart = Chart::new(4.0, 64).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let set = crate::model::WeightedSet::builtin(
            crate::model::SetShape::WholeChart,
            chart,
            crate::model::fs_potential_at,
        )
        .unwrap();
        let sol = crate::envelope::envelope(&set, &crate::envelope::EnvelopeParams::default())
            .unwrap();
        let p = 8;
        let (lo, hi) = l_p_k_bracket(&geom, &sol, p).unwrap();
        assert!(lo <= hi);
        assert!(hi.abs() < 1e-3, "upper {hi}");
        let expect_lo = -((p + 1) as f64).ln() / (2.0 * p as f64);
        assert!((lo - expect_lo).abs() < 1e-3, "lower {lo} vs {expect_lo}");
    }
}
