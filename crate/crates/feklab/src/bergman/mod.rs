//! Bergman functions and measures, the density-convergence experiment for
//! positively curved weights, and Bernstein–Markov growth estimation.

mod density;
mod experiments;

pub use density::{bergman_basis, bergman_function, bergman_measure, rho_at, BergmanDensity};
pub use experiments::{
    bernstein_markov_exponent, density_convergence_experiment, AnalyticWeight, BmFit,
    DensityConvergence,
};
