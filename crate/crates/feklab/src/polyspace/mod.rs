//! The degree-`p` section space realized as polynomials of degree `≤ p`,
//! with weighted norms, Gram matrices and log-scale Vandermonde
//! determinants.
//!
//! All section evaluation is carried in a rescaled representation so that
//! determinants spanning thousands of orders of magnitude never overflow:
//! the reference system is the *scaled monomial* family
//! `m̃_k(z) = √((p+1)·C(p,k))·z^k`, which is orthonormal for the
//! Fubini–Study measure with zero weight, and values are always combined
//! with the pointwise factor `e^{-p·w(z)}` before anything is multiplied
//! together.

mod basis;
mod gram;
mod norm;
mod vandermonde;

pub use basis::{dimension, eval_scaled_monomials, scaling_log, BasisKind, SectionBasis};
pub use gram::{gram, GramMatrix, GramQuadrature};
pub use norm::WeightedNormContext;
pub use vandermonde::{log_abs_det_equilibrated, log_vandermonde};

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Orthonormalize a basis against a Gram matrix: the result has
/// `coeffs = L⁻¹ · old coeffs` where `G = L·L^*` is the (equilibrated)
/// Cholesky factorization.
pub fn orthonormalize(basis: &SectionBasis, g: &GramMatrix) -> Result<SectionBasis> {
    let n = basis.dim();
    if g.entries().nrows() != n {
        return Err(Error::Config("Gram size does not match basis".into()));
    }
    let l = g.cholesky_lower()?;
    // forward-substitute L·X = C  (row by row of the new coefficient matrix)
    let c = basis.coeffs();
    let mut x = DMatrix::<Complex64>::zeros(n, n);
    for col in 0..n {
        for i in 0..n {
            let mut s = c[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    Ok(SectionBasis::from_coeffs(
        basis.degree(),
        x,
        BasisKind::Orthonormalized {
            provenance: g.quadrature_id().to_string(),
        },
    ))
}
