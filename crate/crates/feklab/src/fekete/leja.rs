//! Greedy one-point-at-a-time initialization.

use super::candidates::CandidatePool;
use super::config::Configuration;
use super::eval::CandidateEvaluator;
use crate::error::{Error, Result};
use crate::polyspace::{SectionBasis, WeightedNormContext};
use num_complex::Complex64;

/// Greedy maximizer: point `k+1` maximizes the weighted Vandermonde of the
/// first `k+1` sections over the candidates, given the points already
/// chosen.  Implemented as Gaussian elimination in coefficient space: after
/// each pick the remaining sections are reduced to vanish at the chosen
/// point, so the next pivot *is* the next Vandermonde ratio.
pub fn leja_seed(
    pool: &CandidatePool,
    basis: &SectionBasis,
    ctx: &WeightedNormContext,
) -> Result<Configuration> {
    let n = basis.dim();
    if pool.len() < n {
        return Err(Error::Config(format!(
            "candidate pool has {} points, need at least N_p = {n}",
            pool.len()
        )));
    }
    let eval = CandidateEvaluator::new(pool, ctx);
    // working rows: sections over the scaled monomials
    let c = basis.coeffs();
    let mut rows: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|k| c[(i, k)]).collect())
        .collect();
    let mut chosen: Vec<Complex64> = Vec::with_capacity(n);
    let mut log_w = 0.0f64;
    for k in 0..n {
        let (idx, absval, val) = eval.argmax(&rows[k]);
        if absval <= 0.0 {
            return Err(Error::Numeric(format!(
                "greedy seeding stalled at step {k}: every candidate is a zero of the reduced section"
            )));
        }
        log_w += absval.ln();
        chosen.push(eval.point(idx));
        for i in k + 1..n {
            let ratio = eval.score(&rows[i], idx) / val;
            if ratio != Complex64::ZERO {
                let (head, tail) = rows.split_at_mut(i);
                let pivot_row = &head[k];
                for (t, &pv) in tail[0].iter_mut().zip(pivot_row.iter()) {
                    *t -= ratio * pv;
                }
            }
        }
    }
    Ok(Configuration::new(chosen, log_w, basis.degree()))
}
