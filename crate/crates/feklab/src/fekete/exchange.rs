//! Coordinate-exchange ascent on the weighted Vandermonde determinant.

use super::candidates::CandidatePool;
use super::config::Configuration;
use super::eval::CandidateEvaluator;
use crate::error::{Error, Result};
use crate::polyspace::log_abs_det_equilibrated;
use crate::polyspace::{SectionBasis, WeightedNormContext};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub const DEFAULT_EXCHANGE_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_SWEEPS: usize = 200;
/// Minimal log-gain for one exchange; keeps the ascent strictly monotone
/// so it cannot cycle on a finite pool.
const MIN_STEP_GAIN: f64 = 5e-13;

#[derive(Clone, Copy, Debug)]
pub struct ExchangeParams {
    /// Terminate when a full sweep gains less than this in `log_w`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ExchangeParams {
    fn default() -> Self {
        ExchangeParams {
            tol: DEFAULT_EXCHANGE_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

/// What the solver did, for reproducibility records.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub iterations: usize,
    pub exchanges_accepted: usize,
    pub final_gain_per_sweep: f64,
    pub candidate_count: usize,
    pub seed: u64,
}

struct ExchangeState {
    points: Vec<Complex64>,
    a: DMatrix<Complex64>,
    a_inv: DMatrix<Complex64>,
    log_w: f64,
}

impl ExchangeState {
    fn new(
        points: Vec<Complex64>,
        basis: &SectionBasis,
        ctx: &WeightedNormContext,
    ) -> Result<Self> {
        let n = basis.dim();
        let mut a = DMatrix::<Complex64>::zeros(n, n);
        let mut col = vec![Complex64::ZERO; n];
        for (j, &z) in points.iter().enumerate() {
            basis.eval_with_factor(z, ctx.log_factor_at(z), &mut col);
            for i in 0..n {
                a[(i, j)] = col[i];
            }
        }
        let a_inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("starting configuration is singular".into()))?;
        let log_w = log_abs_det_equilibrated(a.clone());
        Ok(ExchangeState {
            points,
            a,
            a_inv,
            log_w,
        })
    }

    /// Replace point `j` by the candidate with section values `b`;
    /// `score = (A⁻¹ b)_j` must already be known.
    fn replace(&mut self, j: usize, z: Complex64, b: &[Complex64], score: Complex64) {
        let n = self.points.len();
        // w = A⁻¹ b
        let mut w = vec![Complex64::ZERO; n];
        for r in 0..n {
            let mut s = Complex64::ZERO;
            for c in 0..n {
                s += self.a_inv[(r, c)] * b[c];
            }
            w[r] = s;
        }
        // rank-one update of the inverse (Sherman–Morrison for a column swap)
        let inv_row_j: Vec<Complex64> = (0..n).map(|c| self.a_inv[(j, c)]).collect();
        for r in 0..n {
            let factor = if r == j {
                (w[r] - Complex64::ONE) / score
            } else {
                w[r] / score
            };
            if factor != Complex64::ZERO {
                for c in 0..n {
                    self.a_inv[(r, c)] -= factor * inv_row_j[c];
                }
            }
        }
        for i in 0..n {
            self.a[(i, j)] = b[i];
        }
        self.points[j] = z;
        self.log_w += score.norm().ln();
    }

    /// Recompute the inverse and `log_w` from scratch (drift control).
    fn refactor(&mut self) -> Result<()> {
        self.a_inv = self
            .a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("configuration matrix became singular".into()))?;
        self.log_w = log_abs_det_equilibrated(self.a.clone());
        Ok(())
    }
}

/// Sweep coordinates, replacing each point by the candidate that maximizes
/// the determinant with the others fixed (rank-one updates), until a full
/// sweep gains less than `tol` in `log_w`.
pub fn exchange_ascent(
    start: &Configuration,
    pool: &CandidatePool,
    basis: &SectionBasis,
    ctx: &WeightedNormContext,
    params: &ExchangeParams,
) -> Result<(Configuration, SolveReport)> {
    let n = basis.dim();
    if start.points().len() != n {
        return Err(Error::Config(format!(
            "start configuration has {} points, need {n}",
            start.points().len()
        )));
    }
    let eval = CandidateEvaluator::new(pool, ctx);
    let coeffs = basis.coeffs();
    let mut state = ExchangeState::new(start.points().to_vec(), basis, ctx)?;
    let mut accepted_total = 0usize;
    let mut sweeps = 0usize;
    let mut last_gain = f64::INFINITY;
    let mut since_refactor = 0usize;
    let mut b = vec![Complex64::ZERO; n];
    let mut v = vec![Complex64::ZERO; n];
    while sweeps < params.max_sweeps {
        let sweep_start = state.log_w;
        let mut accepted_this_sweep = 0usize;
        for j in 0..n {
            // v = Cᵀ·(row j of A⁻¹): the scaled-monomial coefficients of the
            // section dual to slot j
            for k in 0..n {
                let mut s = Complex64::ZERO;
                for i in 0..n {
                    s += coeffs[(i, k)] * state.a_inv[(j, i)];
                }
                v[k] = s;
            }
            let (idx, absval, score) = eval.argmax(&v);
            if absval.ln() <= MIN_STEP_GAIN {
                continue;
            }
            let z = eval.point(idx);
            basis.eval_with_factor(z, ctx.log_factor_at(z), &mut b);
            state.replace(j, z, &b, score);
            accepted_this_sweep += 1;
            accepted_total += 1;
            since_refactor += 1;
            if since_refactor >= n {
                state.refactor()?;
                since_refactor = 0;
            }
        }
        sweeps += 1;
        last_gain = state.log_w - sweep_start;
        if accepted_this_sweep == 0 || last_gain < params.tol {
            break;
        }
    }
    // exact value at the final points, discarding accumulated update drift
    state.refactor()?;
    if state.log_w + 1e-9 < start.log_w() {
        return Err(Error::Numeric(format!(
            "ascent lost ground: {} -> {}",
            start.log_w(),
            state.log_w
        )));
    }
    let config = Configuration::new(state.points, state.log_w, basis.degree());
    Ok((
        config,
        SolveReport {
            iterations: sweeps,
            exchanges_accepted: accepted_total,
            final_gain_per_sweep: if last_gain.is_finite() { last_gain } else { 0.0 },
            candidate_count: pool.len(),
            seed: 0,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fekete::leja::leja_seed;
    use crate::model::{Chart, SetShape, WeightedSet};

    #[test]
    fn disc_p3_reaches_roots_of_unity_value() {
        let chart = Chart::new(2.0, 64).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        let pool = CandidatePool::build(&set);
        let basis = SectionBasis::monomials(3);
        let ctx = WeightedNormContext::flat_unweighted(3);
        let seed = leja_seed(&pool, &basis, &ctx).unwrap();
        let (best, report) = exchange_ascent(&seed, &pool, &basis, &ctx, &Default::default()).unwrap();
        let target = 16f64.ln();
        assert!(
            best.log_w() >= target - 1e-6 && (best.log_w() - target).abs() < 1e-6,
            "log_w {} vs log 16 {target} ({report:?})",
            best.log_w()
        );
        for &z in best.points() {
            assert!(z.norm() >= 1.0 - 3.0 * chart.spacing());
        }
    }

    #[test]
    fn interval_p2_matches_brute_force() {
        let chart = Chart::new(2.0, 16).unwrap();
        let set = WeightedSet::builtin(SetShape::Interval, chart, |_| 0.0).unwrap();
        let pool = CandidatePool::build(&set);
        let basis = SectionBasis::monomials(2);
        let ctx = WeightedNormContext::flat_unweighted(2);
        let seed = leja_seed(&pool, &basis, &ctx).unwrap();
        let (best, _) = exchange_ascent(&seed, &pool, &basis, &ctx, &Default::default()).unwrap();
        // brute force over all grid-node triples on the coarse interval
        let nodes: Vec<Complex64> = set.nodes();
        let mut brute = f64::NEG_INFINITY;
        for a in 0..nodes.len() {
            for b in a + 1..nodes.len() {
                for c in b + 1..nodes.len() {
                    let v = ((nodes[a] - nodes[b]).norm()
                        * (nodes[a] - nodes[c]).norm()
                        * (nodes[b] - nodes[c]).norm())
                    .ln();
                    brute = brute.max(v);
                }
            }
        }
        assert!(best.log_w() >= brute - 1e-12, "{} < {brute}", best.log_w());
        // {-1, 0, 1}: value 2, endpoints exact in the pool
        assert!((best.log_w() - 2f64.ln()).abs() < 1e-9);
        let mut xs: Vec<f64> = best.points().iter().map(|z| z.re).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((xs[0] + 1.0).abs() < 2.0 * chart.spacing());
        assert!(xs[1].abs() < 2.0 * chart.spacing());
        assert!((xs[2] - 1.0).abs() < 2.0 * chart.spacing());
    }

    #[test]
    fn optimal_start_is_a_fixed_point() {
        let chart = Chart::new(2.0, 32).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        let pool = CandidatePool::build(&set);
        let basis = SectionBasis::monomials(3);
        let ctx = WeightedNormContext::flat_unweighted(3);
        // roots of unity are optimal and exactly present in the pool
        let pts: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * k as f64))
            .collect();
        let start = Configuration::new(pts, 16f64.ln(), 3);
        let (best, report) = exchange_ascent(&start, &pool, &basis, &ctx, &Default::default()).unwrap();
        assert_eq!(report.iterations, 1);
        assert_eq!(report.exchanges_accepted, 0);
        assert!((best.log_w() - 16f64.ln()).abs() < 1e-10);
    }
}
