//! Fused candidate scoring.
//!
//! Both the greedy seeding and the exchange ascent repeatedly ask: given a
//! coefficient vector `v` over the scaled monomials, which candidate
//! maximizes `|Σ_k v_k·m̃_k(z)·e^{-p·w(z)}|`?  The evaluator caches the
//! per-candidate weight factors once and answers with a deterministic
//! parallel scan (ties break to the lowest index; the pool is sorted by
//! `(Re, Im)`, so this is the lexicographic rule).

use super::candidates::CandidatePool;
use crate::polyspace::WeightedNormContext;
use num_complex::Complex64;
use rayon::prelude::*;

pub struct CandidateEvaluator {
    points: Vec<Complex64>,
    log_factors: Vec<f64>,
    steps: Vec<f64>,
    gamma0: f64,
}

impl CandidateEvaluator {
    pub fn new(pool: &CandidatePool, ctx: &WeightedNormContext) -> Self {
        let p = ctx.degree();
        let points: Vec<Complex64> = pool.points().to_vec();
        let log_factors: Vec<f64> = points.iter().map(|&z| ctx.log_factor_at(z)).collect();
        let steps: Vec<f64> = (0..p)
            .map(|k| ((p - k) as f64 / (k + 1) as f64).sqrt())
            .collect();
        CandidateEvaluator {
            points,
            log_factors,
            steps,
            gamma0: crate::polyspace::scaling_log(p, 0),
        }
    }

    pub fn point(&self, idx: usize) -> Complex64 {
        self.points[idx]
    }

    /// `Σ_k v_k·m̃_k(z_c)·e^{-p·w(z_c)}` by one fused recurrence pass.
    pub fn score(&self, v: &[Complex64], c: usize) -> Complex64 {
        let z = self.points[c];
        let mut t = Complex64::new((self.gamma0 + self.log_factors[c]).exp(), 0.0);
        let mut acc = v[0] * t;
        for (k, &s) in self.steps.iter().enumerate() {
            t *= z * s;
            acc += v[k + 1] * t;
        }
        acc
    }

    /// Deterministic argmax of `|score|` over all candidates.
    pub fn argmax(&self, v: &[Complex64]) -> (usize, f64, Complex64) {
        const CHUNK: usize = 4096;
        let n = self.points.len();
        let ranges: Vec<(usize, usize)> = (0..n)
            .step_by(CHUNK)
            .map(|lo| (lo, (lo + CHUNK).min(n)))
            .collect();
        let local: Vec<(usize, f64, Complex64)> = ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let mut best = (lo, -1.0f64, Complex64::ZERO);
                for c in lo..hi {
                    let s = self.score(v, c);
                    let a = s.norm();
                    if a > best.1 {
                        best = (c, a, s);
                    }
                }
                best
            })
            .collect();
        // sequential combine in chunk order keeps ties on the lowest index
        let mut best = (0usize, -1.0f64, Complex64::ZERO);
        for cand in local {
            if cand.1 > best.1 {
                best = cand;
            }
        }
        best
    }
}
