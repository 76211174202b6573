//! Distances between measures and convergence-rate fitting.

mod dictionary;
mod ratefit;
mod wasserstein;

pub use dictionary::{dist_gamma_lower, interpolation_check, TestDictionary};
pub use ratefit::{fit_rate, RateFit};
pub use wasserstein::{w1_1d, w1_circle_arclength, w1_line, Carrier};

use crate::model::DiscreteMeasure;

/// Project a planar measure to carrier coordinates (no support check; use
/// [`w1_1d`] when the carrier precondition matters).
pub fn project_to_carrier(mu: &DiscreteMeasure, carrier: Carrier) -> Vec<(f64, f64)> {
    mu.atoms()
        .iter()
        .filter(|&&(_, m)| m > 0.0)
        .map(|&(z, m)| {
            let x = match carrier {
                Carrier::RealAxis { .. } => z.re,
                Carrier::Circle { radius, .. } => {
                    radius * z.arg().rem_euclid(2.0 * std::f64::consts::PI)
                }
                Carrier::Radius => z.norm(),
            };
            (x, m)
        })
        .collect()
}
