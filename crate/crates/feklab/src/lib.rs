//! # feklab
//!
//! A numerical laboratory for weighted potential theory on the projective
//! line: Fekete configurations, equilibrium weights and measures, Bergman
//! functions, energy/volume functionals, and convergence-rate measurement
//! for the equidistribution of Fekete points.
//!
//! Everything lives on a square grid in the affine coordinate `z = x + iy`
//! ([`model::Chart`]), with the Fubini–Study form (total mass 1) as the
//! reference geometry.  The section space of degree `p` is realized as
//! polynomials of degree `≤ p` ([`polyspace`]); two gauges express their
//! pointwise size:
//!
//! * **flat** — `|s(z)| = |f(z)|·e^{-p·φ(z)}`, the classical weighted
//!   polynomial picture on `ℂ`;
//! * **Fubini–Study** — `|s(z)| = |f(z)|·(1+|z|²)^{-p/2}·e^{-p·ψ(z)}`,
//!   the global picture with a bounded weight `ψ`.
//!
//! The two are the same computation with weights shifted by the local
//! potential `ρ₀(z) = ½log(1+|z|²)`; see [`polyspace::WeightedNormContext`].
//!
//! The guide under `book/` walks through each concept with runnable
//! snippets; those snippets double as doc-tests (see the `book` module at
//! the bottom of this file).

pub mod bergman;
pub mod envelope;
pub mod error;
pub mod fekete;
pub mod functionals;
pub mod metrics;
pub mod model;
pub mod polyspace;
pub mod regops;
pub(crate) mod util;

pub use error::{Error, Result};

// Compile and run the guide's code snippets with `cargo test --doc`.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(charts_and_geometry, "../../../book/src/charts-and-geometry.md");
    chapter!(polynomial_sections, "../../../book/src/polynomial-sections.md");
    chapter!(fekete_points, "../../../book/src/fekete-points.md");
    chapter!(equilibrium, "../../../book/src/equilibrium.md");
    chapter!(bergman_functions, "../../../book/src/bergman-functions.md");
    chapter!(energy_functionals, "../../../book/src/energy-functionals.md");
    chapter!(regularization, "../../../book/src/regularization.md");
    chapter!(measuring_convergence, "../../../book/src/measuring-convergence.md");
    chapter!(experiments, "../../../book/src/experiments.md");
}
