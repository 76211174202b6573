//! The Bergman function `ρ_p(μ, φ)` and Bergman measure.

use crate::error::Result;
use crate::model::{Chart, DiscreteMeasure, GridFunction};
use crate::polyspace::{gram, orthonormalize, GramQuadrature, SectionBasis, WeightedNormContext};
use num_complex::Complex64;
use rayon::prelude::*;

/// `ρ_p` sampled on the chart, along with where its basis came from.
#[derive(Clone, Debug)]
pub struct BergmanDensity {
    rho: GridFunction,
    degree: usize,
    basis_provenance: String,
}

impl BergmanDensity {
    pub fn rho(&self) -> &GridFunction {
        &self.rho
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn basis_provenance(&self) -> &str {
        &self.basis_provenance
    }

    pub fn sup(&self) -> f64 {
        self.rho.max()
    }
}

/// Orthonormalize the monomial family against `(μ, p·w)`.
pub fn bergman_basis(
    quad: &GramQuadrature,
    ctx: &WeightedNormContext,
) -> Result<SectionBasis> {
    let start = SectionBasis::fs_orthonormal(ctx.degree());
    let g = gram(&start, quad, ctx)?;
    orthonormalize(&start, &g)
}

/// Pointwise Bergman function of an orthonormal basis:
/// `ρ(z) = Σ_j |s_j(z)|²_{p·w}`.
pub fn rho_at(basis: &SectionBasis, ctx: &WeightedNormContext, z: Complex64) -> f64 {
    let n = basis.dim();
    let mut vals = vec![Complex64::ZERO; n];
    basis.eval_with_factor(z, ctx.log_factor_at(z), &mut vals);
    vals.iter().map(|v| v.norm_sqr()).sum()
}

/// `ρ_p(μ, w)` on the whole chart grid.
pub fn bergman_function(
    chart: Chart,
    quad: &GramQuadrature,
    ctx: &WeightedNormContext,
) -> Result<BergmanDensity> {
    let basis = bergman_basis(quad, ctx)?;
    let provenance = match basis.kind() {
        crate::polyspace::BasisKind::Orthonormalized { provenance } => provenance.clone(),
        _ => "monomial".to_string(),
    };
    let n = chart.side();
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = chart.coords(idx);
            rho_at(&basis, ctx, chart.node(j, k))
        })
        .collect();
    Ok(BergmanDensity {
        rho: GridFunction::from_values(chart, values)?,
        degree: ctx.degree(),
        basis_provenance: provenance,
    })
}

/// Bergman measure `B_p(μ, w) = N_p⁻¹·ρ_p·μ`: the atoms of `μ` reweighted
/// by `ρ/N_p`, then normalized exactly.
pub fn bergman_measure(mu: &DiscreteMeasure, ctx: &WeightedNormContext) -> Result<DiscreteMeasure> {
    let basis = bergman_basis(&GramQuadrature::Atoms(mu), ctx)?;
    let n_p = ctx.dim() as f64;
    let atoms: Vec<(Complex64, f64)> = mu
        .atoms()
        .iter()
        .map(|&(z, m)| (z, m * rho_at(&basis, ctx, z) / n_p))
        .collect();
    DiscreteMeasure::new(atoms, mu.kind())?.normalized()
}
