//! Domain types shared by every module: charts, grid functions, weighted
//! sets, discrete measures and the reference geometry.
//!
//! All types are immutable after construction and safe to share across
//! threads; operations are pure functions of their inputs.

mod chart;
mod geometry;
mod grid;
pub mod io;
mod measure;
mod set;

pub use chart::Chart;
pub use geometry::{fs_density_at, fs_disc_mass, fs_potential_at, fs_square_mass, ReferenceGeometry};
pub use grid::GridFunction;
pub use measure::{DiscreteMeasure, MeasureKind};
pub use set::{SetShape, WeightedSet};
