//! Assembled functional reports for one weighted set and degree.

use super::dp::d_p;
use super::energy::{energy_difference, EnergyParams};
use super::lp::{l_p_difference, l_p_k_bracket, l_p_normalized};
use crate::envelope::EnvelopeSolution;
use crate::error::{Error, Result};
use crate::fekete::Configuration;
use crate::model::{GridFunction, ReferenceGeometry, WeightedSet};
use crate::polyspace::{GramQuadrature, WeightedNormContext};
use std::sync::Arc;

/// Everything the volume/energy story produces for one `(K, ψ, p)`.
#[derive(Clone, Debug)]
pub struct FunctionalReport {
    pub p: usize,
    /// `L_p(μ⁰, P_Kψ)` under the zero-weight normalization.
    pub l_p_mu0: f64,
    /// Bracket for the sup-norm functional `L_p(K, ψ)`.
    pub l_p_k_bracket: (f64, f64),
    pub e_eq: f64,
    pub d_p: f64,
    /// `ε_p = |L_p(μ⁰, P_Kψ) - E_eq(K, ψ)| ≥ 0`.
    pub eps_p: f64,
    /// `|D_p + E_eq|`, the quantity whose decay tracks the determinant
    /// functional's convergence to the energy.
    pub d_plus_e: f64,
}

/// Assemble the report.  The envelope solution must belong to `(K, ψ)`;
/// `best_config` is the caller's best determinant maximizer for the same
/// data (its context, flat or global, must describe the same weight).
pub fn gap_report(
    set: &WeightedSet,
    psi: &GridFunction,
    sol: &EnvelopeSolution,
    geom: &ReferenceGeometry,
    best_config: &Configuration,
    ctx: &WeightedNormContext,
    energy_params: &EnergyParams,
) -> Result<FunctionalReport> {
    let p = ctx.degree();
    if best_config.degree() != p {
        return Err(Error::Config("configuration degree mismatch".into()));
    }
    // total weight of the equilibrium envelope: w = s = ρ₀ + P_Kψ
    let w_env = Arc::new(sol.u().clone());
    let env_ctx = WeightedNormContext::flat_grid(p, w_env);
    let l_p_mu0 = l_p_normalized(geom, &env_ctx)?;
    let bracket = l_p_k_bracket(geom, sol, p)?;
    let e_eq = energy_difference(set, psi, geom, energy_params)?;
    let d = d_p(geom, best_config, ctx)?;
    let eps_p = (l_p_mu0 - e_eq).abs();
    Ok(FunctionalReport {
        p,
        l_p_mu0,
        l_p_k_bracket: bracket,
        e_eq,
        d_p: d,
        eps_p,
        d_plus_e: (d + e_eq).abs(),
    })
}

/// `V_p(ψ₁, ψ₂)` for bounded admissible weights on the whole model:
/// the gap between the `L_p` difference and the energy difference.
pub fn v_p(
    geom: &ReferenceGeometry,
    set_x: &WeightedSet,
    psi1: &GridFunction,
    psi2: &GridFunction,
    p: usize,
    energy_params: &EnergyParams,
) -> Result<f64> {
    let ctx1 = WeightedNormContext::fs_grid(p, Arc::new(psi1.clone()));
    let ctx2 = WeightedNormContext::fs_grid(p, Arc::new(psi2.clone()));
    let l_diff = l_p_difference(&GramQuadrature::FsGlobal(geom), &ctx1, &ctx2)?;
    let e1 = energy_difference(set_x, psi1, geom, energy_params)?;
    let e2 = energy_difference(set_x, psi2, geom, energy_params)?;
    Ok((l_diff - (e1 - e2)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{envelope, EnvelopeParams};
    use crate::fekete::{solve, FeketeSolveParams};
    use crate::model::{Chart, SetShape};
    use crate::polyspace::SectionBasis;

    #[test]
    fn whole_model_zero_weight_report() {
        let chart = Chart::new(4.0, 48).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let set = WeightedSet::builtin(SetShape::WholeChart, chart, crate::model::fs_potential_at)
            .unwrap();
        let psi = GridFunction::constant(chart, 0.0);
        let sol = envelope(&set, &EnvelopeParams::default()).unwrap();
        let p = 4;
        let ctx = WeightedNormContext::fs_unweighted(p);
        let basis = SectionBasis::monomials(p);
        let (config, _) = solve(&set, &basis, &ctx, &FeketeSolveParams::default()).unwrap();
        let report = gap_report(
            &set,
            &psi,
            &sol,
            &geom,
            &config,
            &ctx,
            &EnergyParams::default(),
        )
        .unwrap();
        // ε_p at ψ = 0 is |L_p(μ⁰, 0)| = 0 up to quadrature
        assert!(report.eps_p < 1e-3, "eps_p {}", report.eps_p);
        assert!(report.e_eq.abs() < 1e-6);
        assert!(report.l_p_k_bracket.0 <= report.l_p_k_bracket.1);
        // D_p + E_eq small already at modest degree for the balanced case
        assert!(report.d_plus_e < 0.4, "d_plus_e {}", report.d_plus_e);
    }

    #[test]
    fn v_p_of_identical_weights_is_zero() {
        let chart = Chart::new(4.0, 40).unwrap();
        let geom = ReferenceGeometry::new(chart);
        let set = WeightedSet::builtin(SetShape::WholeChart, chart, |_| 0.0).unwrap();
        let psi = GridFunction::from_fn(chart, |z| 0.1 / (1.0 + z.norm_sqr()));
        let v = v_p(&geom, &set, &psi, &psi, 4, &EnergyParams::default()).unwrap();
        assert!(v < 1e-9, "got {v}");
    }
}
