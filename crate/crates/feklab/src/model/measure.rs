//! Discrete measures: nonnegative atoms at chart coordinates.

use crate::error::{Error, Result};
use crate::util::pairwise_sum;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    /// Finitely many point masses (e.g. a Fekete measure).
    PointAtoms,
    /// One mass per grid cell, located at the cell center.
    GridCells,
}

/// A nonnegative atomic measure on the chart.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    atoms: Vec<(Complex64, f64)>,
    kind: MeasureKind,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(Complex64, f64)>, kind: MeasureKind) -> Result<Self> {
        if atoms.iter().any(|&(_, m)| !(m >= 0.0) || !m.is_finite()) {
            return Err(Error::Numeric("measure has a negative or non-finite mass".into()));
        }
        Ok(DiscreteMeasure { atoms, kind })
    }

    /// Uniform probability measure on the given points.
    pub fn uniform_on(points: &[Complex64]) -> Self {
        let m = 1.0 / points.len() as f64;
        DiscreteMeasure {
            atoms: points.iter().map(|&z| (z, m)).collect(),
            kind: MeasureKind::PointAtoms,
        }
    }

    pub fn atoms(&self) -> &[(Complex64, f64)] {
        &self.atoms
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total(&self) -> f64 {
        let masses: Vec<f64> = self.atoms.iter().map(|&(_, m)| m).collect();
        pairwise_sum(&masses)
    }

    pub fn is_probability(&self, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol
    }

    /// Rescale so the total is exactly the stored sum divided by itself (1).
    pub fn normalized(&self) -> Result<Self> {
        let t = self.total();
        if !(t > 0.0) {
            return Err(Error::DegenerateMeasure("cannot normalize a null measure".into()));
        }
        Ok(self.scale(1.0 / t))
    }

    pub fn scale(&self, c: f64) -> Self {
        DiscreteMeasure {
            atoms: self.atoms.iter().map(|&(z, m)| (z, m * c)).collect(),
            kind: self.kind,
        }
    }

    /// Sum of two measures (atom lists concatenated; kinds must agree).
    pub fn sum(&self, other: &DiscreteMeasure) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::Config("cannot sum measures of different kinds".into()));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        Ok(DiscreteMeasure {
            atoms,
            kind: self.kind,
        })
    }

    /// `∫ f dμ` for a pointwise-evaluable integrand.
    pub fn integrate(&self, f: impl Fn(Complex64) -> f64) -> f64 {
        let terms: Vec<f64> = self.atoms.iter().map(|&(z, m)| m * f(z)).collect();
        pairwise_sum(&terms)
    }
}
