//! Volume and energy functionals: the normalized log-volume of weighted
//! unit balls, the equilibrium energy, the determinant functional, and the
//! gap quantities between them.

mod dp;
mod energy;
mod key_lemma;
mod lp;
mod report;

pub use dp::d_p;
pub use energy::{energy_difference, EnergyParams};
pub use key_lemma::{key_lemma_margin, KeyLemmaCheck};
pub use lp::{l_p_difference, l_p_k_bracket, l_p_normalized};
pub use report::{gap_report, v_p, FunctionalReport};
