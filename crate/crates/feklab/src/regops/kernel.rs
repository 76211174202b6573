//! The one-dimensional smoothing kernel.

use crate::util::gauss_legendre;

/// Even nonnegative kernel supported in `[-1, 1]` with unit mass.
///
/// This is the polynomial bump `θ(h) = (15/16)(1-h²)²`: it is C¹ (not
/// C^∞), which caps the smoothness order of everything built from it at
/// derivatives of order ≤ 1 plus Hölder control; its moments are exact
/// rational numbers, so the fixed quadrature integrates it exactly.  The
/// first moment `∫ h·θ(h) dh = 0` is structural (evenness), not numerical.
#[derive(Clone, Copy, Debug)]
pub struct SmoothingKernel {
    smoothness_order: usize,
}

impl SmoothingKernel {
    pub fn polynomial_bump() -> Self {
        SmoothingKernel {
            smoothness_order: 1,
        }
    }

    pub fn smoothness_order(&self) -> usize {
        self.smoothness_order
    }

    pub fn eval(&self, h: f64) -> f64 {
        if h.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - h * h;
        15.0 / 16.0 * s * s
    }

    /// Mass under the fixed 32-point Gauss rule (exact for this quartic).
    pub fn quadrature_mass(&self) -> f64 {
        let (x, w) = gauss_legendre(32);
        x.iter().zip(&w).map(|(&x, &w)| w * self.eval(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_mass_and_compact_support() {
        let k = SmoothingKernel::polynomial_bump();
        assert!((k.quadrature_mass() - 1.0).abs() < 1e-10);
        assert_eq!(k.eval(1.0), 0.0);
        assert_eq!(k.eval(-1.0), 0.0);
        assert!(k.eval(0.0) > 0.0);
        // evenness
        assert_eq!(k.eval(0.37), k.eval(-0.37));
    }
}
