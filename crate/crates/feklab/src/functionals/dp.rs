//! The determinant functional of a configuration.

use crate::bergman::bergman_basis;
use crate::error::Result;
use crate::fekete::Configuration;
use crate::model::ReferenceGeometry;
use crate::polyspace::{log_vandermonde, GramQuadrature, WeightedNormContext};

/// `D_p(K, φ) = log ‖det S_p(P)‖_{p·w} / (p·N_p)` evaluated at a best-known
/// configuration, with `S_p` the basis orthonormal for the unweighted
/// global Fubini–Study product.
///
/// The context carries the weight in either gauge; for the classical
/// flat-weight problems pass the flat context (so that, e.g., the unit
/// disc with zero flat weight evaluates the raw polynomial determinant).
pub fn d_p(
    geom: &ReferenceGeometry,
    best_config: &Configuration,
    ctx: &WeightedNormContext,
) -> Result<f64> {
    let on_basis = bergman_basis(
        &GramQuadrature::FsGlobal(geom),
        &WeightedNormContext::fs_unweighted(ctx.degree()),
    )?;
    let lw = log_vandermonde(&on_basis, best_config.points(), ctx)?;
    let p = ctx.degree() as f64;
    let n_p = ctx.dim() as f64;
    Ok(lw / (p * n_p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Chart;
    use num_complex::Complex64;

    fn roots_of_unity(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect()
    }

    #[test]
    fn disc_value_is_stable_across_resolutions() {
        // D_3 at the roots-of-unity optimum: log 16 plus the basis-change
        // constant, divided by p·N_p; the Gram-induced constant must be
        // resolution-stable to 1e-4.
        let p = 3;
        let config = Configuration::new(roots_of_unity(4), 16f64.ln(), p);
        let ctx = WeightedNormContext::flat_unweighted(p);
        let mut vals = Vec::new();
        for m in [64usize, 128] {
            let chart = Chart::new(2.0, m).unwrap();
            let geom = ReferenceGeometry::new(chart);
            vals.push(d_p(&geom, &config, &ctx).unwrap());
        }
        assert!(
            (vals[0] - vals[1]).abs() < 1e-4,
            "D_p across resolutions: {vals:?}"
        );
        // closed form: (log 16 + log|det C|)/(p·N_p) with
        // log|det C| = ½·Σ_k log((p+1)·C(p,k))
        let log_det_c: f64 = (0..=p)
            .map(|k| {
                0.5 * (((p + 1) as f64).ln()
                    + crate::util::log_binomial(p as u64, k as u64))
            })
            .sum();
        let expect = (16f64.ln() + log_det_c) / (p as f64 * (p + 1) as f64);
        assert!(
            (vals[1] - expect).abs() < 2e-3,
            "got {}, closed form {expect}",
            vals[1]
        );
    }

    #[test]
    fn pointwise_larger_weight_decreases_d_p() {
        let p = 3;
        let chart = Chart::new(2.0, 64).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let config = Configuration::new(roots_of_unity(4), 16f64.ln(), p);
        let base = d_p(&geom, &config, &WeightedNormContext::flat_unweighted(p)).unwrap();
        let heavier = d_p(
            &geom,
            &config,
            &WeightedNormContext::flat_fn(p, |z| 0.1 + 0.05 * z.norm_sqr()),
        )
        .unwrap();
        assert!(heavier < base);
    }

    #[test]
    fn permutation_invariance() {
        let p = 3;
        let chart = Chart::new(2.0, 48).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let ctx = WeightedNormContext::flat_unweighted(p);
        let pts = roots_of_unity(4);
        let a = d_p(&geom, &Configuration::new(pts.clone(), 16f64.ln(), p), &ctx).unwrap();
        let mut perm = pts;
        perm.swap(0, 2);
        perm.swap(1, 3);
        let b = d_p(&geom, &Configuration::new(perm, 16f64.ln(), p), &ctx).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
