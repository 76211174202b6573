//! Section bases over the scaled monomial reference system.

use crate::error::{Error, Result};
use crate::model::io::format_hex_f64;
use crate::util::log_binomial;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `N_p = C(p+n, n)`, the dimension of the degree-`≤ p` polynomial space in
/// `n` complex variables.
pub fn dimension(p: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Config("dimension needs n ≥ 1".into()));
    }
    let mut acc: u128 = 1;
    for i in 1..=n {
        acc = acc
            .checked_mul((p + i) as u128)
            .ok_or_else(|| Error::Numeric("binomial overflow".into()))?;
        acc /= i as u128;
    }
    u64::try_from(acc).map_err(|_| Error::Numeric("binomial overflow".into()))
}

/// Log of the scaling factor of the `k`-th scaled monomial,
/// `γ_k = ½·log((p+1)·C(p,k))`.
pub fn scaling_log(p: usize, k: usize) -> f64 {
    0.5 * (((p + 1) as f64).ln() + log_binomial(p as u64, k as u64))
}

/// Evaluate the scaled monomials times a pointwise log factor:
/// `out[k] = m̃_k(z)·e^{log_factor}` computed by a stable recurrence.
pub fn eval_scaled_monomials(p: usize, z: Complex64, log_factor: f64, out: &mut [Complex64]) {
    debug_assert_eq!(out.len(), p + 1);
    let mut t = Complex64::new((scaling_log(p, 0) + log_factor).exp(), 0.0);
    out[0] = t;
    for k in 0..p {
        let step = ((p - k) as f64 / (k + 1) as f64).sqrt();
        t *= z * step;
        out[k + 1] = t;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasisKind {
    /// Raw monomials `1, z, …, z^p`.
    Monomial,
    /// Output of an orthonormalization; records the quadrature it used.
    Orthonormalized { provenance: String },
}

/// A basis of the degree-`≤ p` section space in dimension one.
///
/// Row `i` of `coeffs` expresses section `s_i` over the scaled monomials:
/// `s_i(z) = Σ_k coeffs[i][k]·m̃_k(z)`.  The matrix is lower triangular for
/// every basis produced by this crate.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    degree: usize,
    coeffs: DMatrix<Complex64>,
    kind: BasisKind,
}

impl SectionBasis {
    /// The raw monomial basis `s_k(z) = z^k`.
    pub fn monomials(degree: usize) -> Self {
        let n = degree + 1;
        let mut coeffs = DMatrix::zeros(n, n);
        for k in 0..n {
            coeffs[(k, k)] = Complex64::new((-scaling_log(degree, k)).exp(), 0.0);
        }
        SectionBasis {
            degree,
            coeffs,
            kind: BasisKind::Monomial,
        }
    }

    /// The scaled-monomial basis itself: orthonormal for the Fubini–Study
    /// measure with zero weight (exact identity Gram in the continuum).
    pub fn fs_orthonormal(degree: usize) -> Self {
        SectionBasis {
            degree,
            coeffs: DMatrix::identity(degree + 1, degree + 1),
            kind: BasisKind::Orthonormalized {
                provenance: "fs-analytic".into(),
            },
        }
    }

    pub fn from_coeffs(degree: usize, coeffs: DMatrix<Complex64>, kind: BasisKind) -> Self {
        assert_eq!(coeffs.nrows(), degree + 1);
        assert_eq!(coeffs.ncols(), degree + 1);
        SectionBasis {
            degree,
            coeffs,
            kind,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn coeffs(&self) -> &DMatrix<Complex64> {
        &self.coeffs
    }

    /// `log|det C|` of the coefficient matrix over the *raw* monomials;
    /// this is the configuration-independent constant relating Vandermonde
    /// values in this basis to raw-monomial ones.
    pub fn log_det_coeffs_raw(&self) -> f64 {
        // det over raw monomials = det(coeffs)·Π_k e^{γ_k}
        let mut log_det = (0..self.dim())
            .map(|k| scaling_log(self.degree, k))
            .sum::<f64>();
        // triangular determinant of `coeffs` — fall back to LU for safety
        let lu = self.coeffs.clone().lu();
        let det: Complex64 = lu.determinant();
        log_det += det.norm().ln();
        log_det
    }

    /// Section values with pointwise factor: `out[i] = s_i(z)·e^{log_factor}`.
    pub fn eval_with_factor(&self, z: Complex64, log_factor: f64, out: &mut [Complex64]) {
        let n = self.dim();
        debug_assert_eq!(out.len(), n);
        let mut mono = vec![Complex64::ZERO; n];
        eval_scaled_monomials(self.degree, z, log_factor, &mut mono);
        for i in 0..n {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                let c = self.coeffs[(i, k)];
                if c != Complex64::ZERO {
                    acc += c * mono[k];
                }
            }
            out[i] = acc;
        }
    }

    /// Serialize as CSV: degree, kind, then row-major raw-monomial
    /// coefficients as hex floats.
    pub fn write_csv(&self, w: &mut impl std::io::Write) -> Result<()> {
        writeln!(w, "degree,kind")?;
        let kind = match &self.kind {
            BasisKind::Monomial => "monomial".to_string(),
            BasisKind::Orthonormalized { provenance } => format!("orthonormalized:{provenance}"),
        };
        writeln!(w, "{},{}", self.degree, kind)?;
        writeln!(w, "row,col,re,im")?;
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                // convert scaled-monomial coefficients to raw-monomial ones
                let scale = scaling_log(self.degree, k).exp();
                let c = self.coeffs[(i, k)] * scale;
                writeln!(
                    w,
                    "{},{},{},{}",
                    i,
                    k,
                    format_hex_f64(c.re),
                    format_hex_f64(c.im)
                )?;
            }
        }
        Ok(())
    }
}
