//! Regularization toolbox on flat charts: the regularized maximum, radial
//! mollification, averages over shrinking discs, and the
//! Kiselman–Legendre transform.

mod averages;
mod kernel;
mod max_eps;
mod mollify;

pub use averages::{chi_profile, chi_second_moment, kiselman_legendre, psi_average, KiselmanParams};
pub use kernel::SmoothingKernel;
pub use max_eps::{max_eps, max_eps_mc};
pub use mollify::{mollify, mollify_margin};
