//! Pointwise weighted norms for sections.
//!
//! The size of a section at a point is always `|f(z)|·e^{-p·w(z)}` for a
//! *total weight* `w`.  The flat gauge takes `w = φ` directly; the
//! Fubini–Study gauge takes `w = ρ₀ + ψ`, which reproduces
//! `|f(z)|·(1+|z|²)^{-p/2}·e^{-p·ψ(z)}`.  The two descriptions of the same
//! weighted set are related by `φ = ρ₀ + ψ` and give identical Fekete
//! configurations.

use crate::model::{fs_potential_at, GridFunction};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
enum TotalWeight {
    /// Flat gauge, zero weight: `w ≡ 0`.
    Zero,
    /// Fubini–Study gauge, zero weight: `w = ρ₀`.
    FsZero,
    /// Flat gauge with a sampled weight (bilinear off nodes).
    Grid(Arc<GridFunction>),
    /// Fubini–Study gauge with a sampled bounded weight: `w = ρ₀ + ψ`.
    FsGrid(Arc<GridFunction>),
    /// Closed-form total weight.
    Func(Arc<dyn Fn(Complex64) -> f64 + Send + Sync>),
}

impl fmt::Debug for TotalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TotalWeight::Zero => write!(f, "Zero"),
            TotalWeight::FsZero => write!(f, "FsZero"),
            TotalWeight::Grid(_) => write!(f, "Grid(..)"),
            TotalWeight::FsGrid(_) => write!(f, "FsGrid(..)"),
            TotalWeight::Func(_) => write!(f, "Func(..)"),
        }
    }
}

/// Degree plus the pointwise weight rule.
#[derive(Clone, Debug)]
pub struct WeightedNormContext {
    degree: usize,
    weight: TotalWeight,
}

impl WeightedNormContext {
    /// Flat gauge, `φ = 0`: plain polynomial modulus.
    pub fn flat_unweighted(degree: usize) -> Self {
        WeightedNormContext {
            degree,
            weight: TotalWeight::Zero,
        }
    }

    /// Flat gauge with a sampled weight `φ`.
    pub fn flat_grid(degree: usize, phi: Arc<GridFunction>) -> Self {
        WeightedNormContext {
            degree,
            weight: TotalWeight::Grid(phi),
        }
    }

    /// Flat gauge with a closed-form weight.
    pub fn flat_fn(degree: usize, phi: impl Fn(Complex64) -> f64 + Send + Sync + 'static) -> Self {
        WeightedNormContext {
            degree,
            weight: TotalWeight::Func(Arc::new(phi)),
        }
    }

    /// Fubini–Study gauge, `ψ = 0`: the reference metric.
    pub fn fs_unweighted(degree: usize) -> Self {
        WeightedNormContext {
            degree,
            weight: TotalWeight::FsZero,
        }
    }

    /// Fubini–Study gauge with a sampled bounded weight `ψ`.
    pub fn fs_grid(degree: usize, psi: Arc<GridFunction>) -> Self {
        WeightedNormContext {
            degree,
            weight: TotalWeight::FsGrid(psi),
        }
    }

    /// Fubini–Study gauge with a closed-form bounded weight `ψ`.
    pub fn fs_fn(degree: usize, psi: impl Fn(Complex64) -> f64 + Send + Sync + 'static) -> Self {
        WeightedNormContext {
            degree,
            weight: TotalWeight::Func(Arc::new(move |z| fs_potential_at(z) + psi(z))),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    /// The total weight `w(z)`.
    pub fn total_weight_at(&self, z: Complex64) -> f64 {
        match &self.weight {
            TotalWeight::Zero => 0.0,
            TotalWeight::FsZero => fs_potential_at(z),
            TotalWeight::Grid(g) => g.eval(z),
            TotalWeight::FsGrid(g) => fs_potential_at(z) + g.eval(z),
            TotalWeight::Func(f) => f(z),
        }
    }

    /// `-p·w(z)`, the log of the pointwise section factor.
    pub fn log_factor_at(&self, z: Complex64) -> f64 {
        -(self.degree as f64) * self.total_weight_at(z)
    }

    /// Same context at another degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        WeightedNormContext {
            degree,
            weight: self.weight.clone(),
        }
    }
}
