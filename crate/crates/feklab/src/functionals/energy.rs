//! The equilibrium energy by path quadrature.
//!
//! The only formula used is the derivative identity: along any affine path
//! of weights the energy's derivative is the pairing with the equilibrium
//! measure.  Every energy value is therefore assembled from two path
//! integrals with Gauss–Legendre quadrature in the path parameter:
//!
//! * from the zero weight on `K` to `ψ`, pairing with `μ_eq(K, t·ψ)`,
//! * plus the offset `E_eq(K, 0)` computed on the whole model along
//!   `s ↦ s·P_K0`, where no envelope solves are needed — the path stays
//!   admissible and its Monge–Ampère density is explicit.

use crate::envelope::{envelope, mu_eq_from_solution, nma_of_fs_weight, EnvelopeParams};
use crate::error::{Error, Result};
use crate::model::{GridFunction, ReferenceGeometry, WeightedSet};
use crate::util::gauss_legendre;

#[derive(Clone, Copy, Debug)]
pub struct EnergyParams {
    /// Gauss–Legendre nodes per path.
    pub quad_nodes: usize,
    pub envelope: EnvelopeParams,
    /// Re-run with doubled nodes and fail if the two disagree by ≥ 1e-4.
    pub check_doubling: bool,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            quad_nodes: 8,
            envelope: EnvelopeParams::default(),
            check_doubling: false,
        }
    }
}

/// `E_eq(K, ψ)` for a bounded weight `ψ` on the set, under the
/// normalization `E_eq(X, 0) = 0`.  `set` provides the mask; its stored
/// weight is ignored in favour of `psi`.
pub fn energy_difference(
    set: &WeightedSet,
    psi: &GridFunction,
    geom: &ReferenceGeometry,
    params: &EnergyParams,
) -> Result<f64> {
    if params.quad_nodes < 4 {
        return Err(Error::Config("energy path needs at least 4 quadrature nodes".into()));
    }
    let value = energy_once(set, psi, geom, params, params.quad_nodes)?;
    if params.check_doubling {
        let fine = energy_once(set, psi, geom, params, 2 * params.quad_nodes)?;
        if (value - fine).abs() >= 1e-4 {
            return Err(Error::Consistency(format!(
                "energy path quadrature is under-resolved: {value} vs {fine} after doubling"
            )));
        }
    }
    Ok(value)
}

fn energy_once(
    set: &WeightedSet,
    psi: &GridFunction,
    geom: &ReferenceGeometry,
    params: &EnergyParams,
    nodes: usize,
) -> Result<f64> {
    let chart = set.chart();
    if psi.chart() != chart || geom.chart() != chart {
        return Err(Error::Config("energy inputs use different charts".into()));
    }
    let rho0 = geom.fs_potential();
    let (xs, ws) = gauss_legendre(nodes);
    // path 1: ⟨ψ, μ_eq(K, tψ)⟩ dt over t ∈ [0,1]
    let mut first = 0.0;
    for (&x, &w) in xs.iter().zip(&ws) {
        let t = 0.5 * (x + 1.0);
        let obstacle = rho0.zip_map(psi, |a, b| a + t * b);
        let level = set.with_weight_grid(obstacle)?;
        let sol = envelope(&level, &params.envelope)?;
        let mu = mu_eq_from_solution(&sol)?;
        first += 0.5 * w * mu.integrate(|z| psi.eval(z));
    }
    Ok(first + offset_energy(set, geom, params, nodes)?)
}

/// `E_eq(K, 0) = E(P_K 0)`: path `s ↦ s·v` on the whole model with
/// `v = P_K0`, whose Monge–Ampère measure needs no envelope solve.
fn offset_energy(
    set: &WeightedSet,
    geom: &ReferenceGeometry,
    params: &EnergyParams,
    nodes: usize,
) -> Result<f64> {
    let rho0 = geom.fs_potential();
    let zero_obstacle = rho0.clone();
    let base = set.with_weight_grid(zero_obstacle)?;
    let sol = envelope(&base, &params.envelope)?;
    // v = s₀ - ρ₀, bounded
    let v = sol.u().zip_map(rho0, |a, b| a - b);
    // quick exit: v ≡ 0 (K essentially the whole model)
    if v.sup_abs() < 1e-12 {
        return Ok(0.0);
    }
    let (xs, ws) = gauss_legendre(nodes);
    let mut acc = 0.0;
    for (&x, &w) in xs.iter().zip(&ws) {
        let s = 0.5 * (x + 1.0);
        let sv = v.map(|val| s * val);
        let mu = nma_of_fs_weight(&sv, geom)?;
        acc += 0.5 * w * mu.integrate(|z| v.eval(z));
    }
    Ok(acc)
}
