//! Gram matrices of section bases under weighted L² products.

use super::basis::{scaling_log, SectionBasis};
use super::norm::WeightedNormContext;
use crate::error::{Error, Result};
use crate::model::{DiscreteMeasure, ReferenceGeometry};
use crate::util::gauss_legendre;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Relative pivot threshold below which a Gram matrix is declared
/// degenerate.  Applied after diagonal equilibration, so it measures true
/// rank deficiency rather than the (expected, huge) dynamic range of
/// monomial norms.
const DEGENERATE_PIVOT_RATIO: f64 = 1e-14;

/// Where the L² product integrates.
pub enum GramQuadrature<'a> {
    /// Atoms of a discrete measure (midpoint rule for grid-cell measures).
    Atoms(&'a DiscreteMeasure),
    /// The global Fubini–Study probability measure: grid part over
    /// `|z| ≤ R` plus an analytic radial tail for `|z| > R` with the
    /// bounded weight part frozen at its ring average (exact for the
    /// unweighted product).
    FsGlobal(&'a ReferenceGeometry),
    /// Same, but with the exact 1-D tail for a *radial* bounded weight
    /// `ψ(z) = g(|z|)`; removes the ring-constant bias that otherwise
    /// dominates high degrees.
    FsGlobalRadial {
        geom: &'a ReferenceGeometry,
        psi_radial: &'a (dyn Fn(f64) -> f64 + Sync),
    },
}

/// Hermitian positive-definite Gram matrix with a record of the quadrature
/// that produced it.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    entries: DMatrix<Complex64>,
    quadrature_id: String,
}

impl GramMatrix {
    pub fn new(entries: DMatrix<Complex64>, quadrature_id: String) -> Self {
        GramMatrix {
            entries,
            quadrature_id,
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn quadrature_id(&self) -> &str {
        &self.quadrature_id
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Hermitian deviation `max |G - G^*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                d = d.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// `log det G` through the equilibrated Cholesky factorization.
    pub fn log_det(&self) -> Result<f64> {
        let l = self.cholesky_lower()?;
        Ok((0..self.dim()).map(|i| 2.0 * l[(i, i)].re.ln()).sum())
    }

    /// Cholesky factor `L` with `G = L·L^*`.
    ///
    /// Diagonal equilibration first; a pivot ratio below
    /// `DEGENERATE_PIVOT_RATIO` (or a nonpositive pivot) reports the
    /// degenerate-measure error.
    pub fn cholesky_lower(&self) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        let g = &self.entries;
        let mut d = vec![0.0f64; n];
        for i in 0..n {
            let gii = g[(i, i)].re;
            if !(gii > 0.0) {
                return Err(Error::DegenerateMeasure(format!(
                    "Gram diagonal entry {i} is not positive ({gii:e}); {}",
                    self.quadrature_id
                )));
            }
            d[i] = gii.sqrt();
        }
        let mut l = DMatrix::<Complex64>::zeros(n, n);
        let mut max_pivot: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                let mut s = g[(i, j)] / (d[i] * d[j]);
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                if j == i {
                    let pivot = s.re;
                    max_pivot = max_pivot.max(pivot);
                    if !(pivot > 0.0) || pivot < DEGENERATE_PIVOT_RATIO * max_pivot {
                        return Err(Error::DegenerateMeasure(format!(
                            "equilibrated Cholesky pivot {pivot:e} at index {i} \
                             (largest {max_pivot:e}); {}",
                            self.quadrature_id
                        )));
                    }
                    l[(i, i)] = Complex64::new(pivot.sqrt(), 0.0);
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        // undo the equilibration: L ← D·L̂
        for i in 0..n {
            for j in 0..=i {
                l[(i, j)] *= Complex64::new(d[i], 0.0);
            }
        }
        Ok(l)
    }
}

/// Accumulate `Σ mass·t·t^*` (lower triangle) over `(z, mass)` pairs in the
/// scaled monomial reference system.  Deterministic: fixed chunking and an
/// in-order pairwise reduction.
fn accumulate_reference(
    pairs: &[(Complex64, f64)],
    ctx: &WeightedNormContext,
) -> Vec<Complex64> {
    let n = ctx.dim();
    let tri = n * (n + 1) / 2;
    let chunk = 1024;
    let chunks: Vec<Vec<Complex64>> = pairs
        .par_chunks(chunk)
        .map(|block| {
            let mut acc = vec![Complex64::ZERO; tri];
            let mut t = vec![Complex64::ZERO; n];
            for &(z, mass) in block {
                if mass == 0.0 {
                    continue;
                }
                super::basis::eval_scaled_monomials(
                    ctx.degree(),
                    z,
                    ctx.log_factor_at(z),
                    &mut t,
                );
                let mut idx = 0;
                for i in 0..n {
                    let ti = t[i] * mass;
                    for j in 0..=i {
                        acc[idx] += ti * t[j].conj();
                        idx += 1;
                    }
                }
            }
            acc
        })
        .collect();
    // in-order pairwise tree reduction over chunks
    fn reduce(blocks: &[Vec<Complex64>], tri: usize) -> Vec<Complex64> {
        match blocks.len() {
            0 => vec![Complex64::ZERO; tri],
            1 => blocks[0].clone(),
            len => {
                let (a, b) = blocks.split_at(len / 2);
                let x = reduce(a, tri);
                let y = reduce(b, tri);
                x.iter().zip(&y).map(|(&u, &v)| u + v).collect()
            }
        }
    }
    reduce(&chunks, tri)
}

/// `∫_A^∞ u^k (1+u)^{-m} du` for `k < m - 1`, by the descending recursion
/// `J(k,m) = A^k(1+A)^{-(m-1)}/(m-1) + k/(m-1)·J(k-1, m-1)`.
fn tail_integral(k: usize, m: usize, a: f64) -> f64 {
    assert!(k + 1 < m);
    if k == 0 {
        return (1.0 + a).powi(-(m as i32 - 1)) / (m as f64 - 1.0);
    }
    let boundary = a.powi(k as i32) * (1.0 + a).powi(-(m as i32 - 1)) / (m as f64 - 1.0);
    boundary + k as f64 / (m as f64 - 1.0) * tail_integral(k - 1, m - 1, a)
}

/// `∫_A^∞ u^k (1+u)^{-(p+2)} e^{-2p·g(√u)} du` by log-space Gauss
/// quadrature on `u = A/t`, `t ∈ (0, 1]`.
fn tail_integral_radial(k: usize, p: usize, a: f64, g: &(dyn Fn(f64) -> f64 + Sync)) -> f64 {
    let (nodes, weights) = gauss_legendre(64);
    let mut total = 0.0;
    for (&x, &w) in nodes.iter().zip(&weights) {
        let t = 0.5 * (x + 1.0);
        // u^k·(1+u)^{-(p+2)}·|du| = A^{k+1}·t^{p-k}·(t+A)^{-(p+2)} dt
        let log_term = (k as f64 + 1.0) * a.ln() + (p - k) as f64 * t.ln()
            - (p as f64 + 2.0) * (t + a).ln()
            - 2.0 * p as f64 * g((a / t).sqrt());
        total += 0.5 * w * log_term.exp();
    }
    total
}

/// Gram matrix `G_ij = Σ mass·s_i(z)·conj(s_j(z))·e^{-2p·w(z)}`.
pub fn gram(
    basis: &SectionBasis,
    quadrature: &GramQuadrature,
    ctx: &WeightedNormContext,
) -> Result<GramMatrix> {
    if basis.degree() != ctx.degree() {
        return Err(Error::Config(format!(
            "basis degree {} does not match context degree {}",
            basis.degree(),
            ctx.degree()
        )));
    }
    let n = basis.dim();
    let p = ctx.degree();
    let (tri_ref, quad_id) = match quadrature {
        GramQuadrature::Atoms(mu) => {
            if mu.len() < n {
                return Err(Error::DegenerateMeasure(format!(
                    "measure has {} atoms, fewer than the dimension {n}",
                    mu.len()
                )));
            }
            (
                accumulate_reference(mu.atoms(), ctx),
                format!("atoms(n={},kind={:?})", mu.len(), mu.kind()),
            )
        }
        GramQuadrature::FsGlobal(geom) | GramQuadrature::FsGlobalRadial { geom, .. } => {
            let chart = geom.chart();
            let r = chart.half_width();
            let h = chart.spacing();
            let h2 = h * h;
            let pairs: Vec<(Complex64, f64)> = chart
                .iter_nodes()
                .filter(|&(_, _, z)| z.norm() <= r)
                .map(|(_, _, z)| (z, crate::model::fs_density_at(z) * h2))
                .collect();
            let mut tri = accumulate_reference(&pairs, ctx);
            let a = r * r;
            let (tail, quad_id): (Box<dyn Fn(usize) -> f64>, String) = match quadrature {
                GramQuadrature::FsGlobalRadial { psi_radial, .. } => (
                    Box::new(move |k| {
                        (2.0 * scaling_log(p, k)).exp()
                            * tail_integral_radial(k, p, a, *psi_radial)
                    }),
                    format!("fs-global(R={r},M={},tail=radial)", chart.resolution()),
                ),
                _ => {
                    // bounded weight part frozen at its ring average; exact
                    // for the unweighted Fubini–Study product
                    let ring: Vec<f64> = chart
                        .iter_nodes()
                        .filter(|&(_, _, z)| {
                            let d = z.norm();
                            d >= r - 2.0 * h && d <= r - h
                        })
                        .map(|(_, _, z)| {
                            ctx.total_weight_at(z) - crate::model::fs_potential_at(z)
                        })
                        .collect();
                    let c_psi = if ring.is_empty() {
                        0.0
                    } else {
                        ring.iter().sum::<f64>() / ring.len() as f64
                    };
                    (
                        Box::new(move |k| {
                            (2.0 * scaling_log(p, k) - 2.0 * p as f64 * c_psi).exp()
                                * tail_integral(k, p + 2, a)
                        }),
                        format!(
                            "fs-global(R={r},M={},tail-weight=rho0+{c_psi:.6})",
                            chart.resolution()
                        ),
                    )
                }
            };
            let mut idx = 0;
            for i in 0..n {
                for j in 0..=i {
                    if i == j {
                        tri[idx] += Complex64::new(tail(i), 0.0);
                    }
                    idx += 1;
                }
            }
            (tri, quad_id)
        }
    };
    // unpack triangle into a Hermitian reference Gram
    let mut g_ref = DMatrix::<Complex64>::zeros(n, n);
    let mut idx = 0;
    for i in 0..n {
        for j in 0..=i {
            g_ref[(i, j)] = tri_ref[idx];
            g_ref[(j, i)] = tri_ref[idx].conj();
            idx += 1;
        }
    }
    // congruence to the requested basis: G = C·G̃·C^*
    let c = basis.coeffs();
    let g = c * &g_ref * c.adjoint();
    // symmetrize exactly
    let mut g_sym = g.clone();
    for i in 0..n {
        for j in 0..n {
            g_sym[(i, j)] = 0.5 * (g[(i, j)] + g[(j, i)].conj());
        }
    }
    Ok(GramMatrix::new(g_sym, quad_id))
}
