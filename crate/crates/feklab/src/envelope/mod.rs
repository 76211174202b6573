//! Equilibrium potentials by a discrete obstacle problem, their
//! Monge–Ampère measures, and regularity diagnostics.

mod checks;
mod ma;
mod solver;

pub use checks::{
    holder_mass_diagnostic, lipschitz_projection_check, max_principle_check, HolderDiagnostic,
    PshCheck,
};
pub use ma::{ma_measure, mu_eq_from_solution, nma_of_fs_weight, MAMeasure};
pub use solver::{envelope, EnvelopeParams, EnvelopeSolution};

use crate::error::Result;
use crate::model::{DiscreteMeasure, WeightedSet};

/// Equilibrium measure of a weighted set: envelope, Monge–Ampère, exact
/// normalization.
pub fn mu_eq(set: &WeightedSet, params: &EnvelopeParams) -> Result<DiscreteMeasure> {
    let sol = envelope(set, params)?;
    mu_eq_from_solution(&sol)
}
