//! Fekete configurations by greedy seeding plus coordinate-exchange ascent
//! on the weighted Vandermonde determinant.

mod candidates;
mod config;
mod eval;
mod exchange;
mod leja;

pub use candidates::CandidatePool;
pub use config::{defect, read_configuration, write_configuration, Configuration};
pub use exchange::{exchange_ascent, ExchangeParams, SolveReport, DEFAULT_EXCHANGE_TOL};
pub use leja::leja_seed;

use crate::error::Result;
use crate::model::WeightedSet;
use crate::polyspace::{SectionBasis, WeightedNormContext};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct FeketeSolveParams {
    pub exchange: ExchangeParams,
    /// Extra randomized restarts (0 = deterministic greedy seed only).
    pub restarts: usize,
    /// Seed for the restart subsampling; recorded in the report.
    pub seed: u64,
}

impl Default for FeketeSolveParams {
    fn default() -> Self {
        FeketeSolveParams {
            exchange: ExchangeParams::default(),
            restarts: 0,
            seed: 0,
        }
    }
}

/// Seed greedily, ascend by exchanges, optionally repeat from randomized
/// subsample seeds, and return the best configuration found together with
/// the greedy seed's defect against it.
pub fn solve(
    set: &WeightedSet,
    basis: &SectionBasis,
    ctx: &WeightedNormContext,
    params: &FeketeSolveParams,
) -> Result<(Configuration, SolveReport)> {
    set.check_degree_support(basis.dim())?;
    let pool = CandidatePool::build(set);
    let seed_cfg = leja_seed(&pool, basis, ctx)?;
    let (mut best, mut report) = exchange_ascent(&seed_cfg, &pool, basis, ctx, &params.exchange)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.restarts {
        // greedy seed on a random half of the pool, full-pool ascent
        let mut sample: Vec<_> = pool.points().to_vec();
        sample.shuffle(&mut rng);
        sample.truncate((pool.len() / 2).max(basis.dim()));
        let sub = CandidatePool::from_points(sample);
        let Ok(alt_seed) = leja_seed(&sub, basis, ctx) else {
            continue;
        };
        let (cand, cand_report) = exchange_ascent(&alt_seed, &pool, basis, ctx, &params.exchange)?;
        if cand.log_w() > best.log_w() {
            best = cand;
            report = cand_report;
        }
    }
    report.seed = params.seed;
    let mut best = best;
    best.set_defect(0.0); // best known = itself
    Ok((best, report))
}

#[cfg(test)]
mod probes {
    use super::*;
    use crate::model::{Chart, SetShape, WeightedSet};
    use crate::polyspace::{SectionBasis, WeightedNormContext};

    #[test]
    #[ignore = "criterion-1 probe"]
    fn disc_optimality_m256() {
        let chart = Chart::new(2.0, 256).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        let t_total = std::time::Instant::now();
        for p in [3usize, 5, 8, 12, 16] {
            let t0 = std::time::Instant::now();
            let basis = SectionBasis::monomials(p);
            let ctx = WeightedNormContext::flat_unweighted(p);
            let (best, rep) = solve(&set, &basis, &ctx, &FeketeSolveParams::default()).unwrap();
            let n = (p + 1) as f64;
            let target = 0.5 * n * n.ln();
            let minr = best
                .points()
                .iter()
                .map(|z| z.norm())
                .fold(f64::INFINITY, f64::min);
            eprintln!(
                "p={p}: err {:+.2e}, min|z| {:.4}, sweeps {}, acc {}, pool {}, {:.2}s",
                best.log_w() - target,
                minr,
                rep.iterations,
                rep.exchanges_accepted,
                rep.candidate_count,
                t0.elapsed().as_secs_f64()
            );
        }
        eprintln!("total {:.1}s", t_total.elapsed().as_secs_f64());
    }
}

#[cfg(test)]
mod probes_heavy {
    use super::*;
    use crate::model::{Chart, SetShape, WeightedSet};
    use crate::polyspace::{SectionBasis, WeightedNormContext};

    #[test]
    #[ignore = "criterion-4 probe"]
    fn disc_p64_and_x_case() {
        let chart = Chart::new(2.0, 128).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        for p in [32usize, 64] {
            let t0 = std::time::Instant::now();
            let basis = SectionBasis::monomials(p);
            let ctx = WeightedNormContext::flat_unweighted(p);
            let (best, rep) = solve(&set, &basis, &ctx, &FeketeSolveParams::default()).unwrap();
            let n = (p + 1) as f64;
            eprintln!(
                "disc p={p}: err {:+.3e}, sweeps {}, acc {}, {:.2}s",
                best.log_w() - 0.5 * n * n.ln(),
                rep.iterations,
                rep.exchanges_accepted,
                t0.elapsed().as_secs_f64()
            );
        }
        // X-case: strictly positive curvature, rotation invariant
        let chart = Chart::new(6.0, 192).unwrap();
        let lambda = 0.45;
        let setx = WeightedSet::builtin(SetShape::WholeChart, chart, |_| 0.0).unwrap();
        for p in [16usize, 64] {
            let t0 = std::time::Instant::now();
            let basis = SectionBasis::monomials(p);
            let ctx = WeightedNormContext::fs_fn(p, move |z| {
                lambda * (1.0 - 1.0 / (1.0 + z.norm_sqr()))
            });
            let (best, rep) = solve(&setx, &basis, &ctx, &FeketeSolveParams::default()).unwrap();
            let radii: Vec<f64> = best.points().iter().map(|z| z.norm()).collect();
            let rmax = radii.iter().cloned().fold(0.0f64, f64::max);
            eprintln!(
                "X p={p}: log_w {:.4}, max|z| {:.3}, sweeps {}, acc {}, {:.2}s",
                best.log_w(),
                rmax,
                rep.iterations,
                rep.exchanges_accepted,
                t0.elapsed().as_secs_f64()
            );
        }
    }
}
