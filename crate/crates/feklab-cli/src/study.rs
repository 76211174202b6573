//! End-to-end rate studies: solve Fekete configurations across a degree
//! ladder, compare against the equilibrium measure, fit rates, emit
//! CSV/SVG.

use crate::config::{ExperimentConfig, Gauge};
use crate::svg::{log_log_plot, Series};
use feklab::bergman::{density_convergence_experiment, AnalyticWeight};
use feklab::envelope::{envelope, mu_eq_from_solution, EnvelopeParams, EnvelopeSolution};
use feklab::error::{Error, Result};
use feklab::fekete::{read_configuration, solve, write_configuration, Configuration, ExchangeParams, FeketeSolveParams};
use feklab::functionals::{d_p, energy_difference, l_p_normalized, EnergyParams};
use feklab::metrics::{
    dist_gamma_lower, fit_rate, project_to_carrier, w1_1d, Carrier, TestDictionary,
};
use feklab::model::{
    fs_potential_at, Chart, DiscreteMeasure, GridFunction, ReferenceGeometry, SetShape,
    WeightedSet,
};
use feklab::polyspace::{SectionBasis, WeightedNormContext};
use std::sync::Arc;

/// One degree's worth of measurements.
#[derive(Clone, Debug)]
pub struct RateRow {
    pub p: usize,
    pub sigma_p: f64,
    pub w1: f64,
    pub dist_gamma: f64,
    pub d_p: f64,
    pub eps_p: f64,
    pub d_plus_e: f64,
}

#[derive(Clone, Debug)]
pub struct EquidistributionStudy {
    pub rows: Vec<RateRow>,
    pub w1_slope: f64,
    pub dist_slope: f64,
    pub e_eq: f64,
    pub csv: String,
    pub svg: String,
}

/// The context and basis appropriate to the experiment's gauge.
pub fn gauge_pieces(cfg: &ExperimentConfig, p: usize) -> (SectionBasis, WeightedNormContext) {
    let expr = cfg.weight.clone();
    match cfg.gauge {
        Gauge::Flat => (
            SectionBasis::monomials(p),
            WeightedNormContext::flat_fn(p, move |z| expr.eval(z)),
        ),
        Gauge::Global => (
            SectionBasis::fs_orthonormal(p),
            WeightedNormContext::fs_fn(p, move |z| expr.eval(z)),
        ),
    }
}

fn carrier_for(cfg: &ExperimentConfig) -> Carrier {
    let h = cfg.chart_half_width / cfg.chart_resolution as f64;
    match cfg.shape {
        SetShape::UnitDisc => Carrier::Circle {
            radius: 1.0,
            slack: 3.0 * h,
        },
        SetShape::Interval => Carrier::RealAxis { slack: 3.0 * h },
        // rotation-invariant experiments compare radial profiles
        _ => Carrier::Radius,
    }
}

fn dictionary_for(cfg: &ExperimentConfig, carrier: Carrier) -> Result<TestDictionary> {
    match carrier {
        Carrier::Circle { .. } => {
            TestDictionary::trig(cfg.gamma, 2.0 * std::f64::consts::PI, cfg.dictionary_size / 2)
        }
        Carrier::RealAxis { .. } => TestDictionary::trig_and_bumps(
            cfg.gamma,
            -1.0,
            1.0,
            cfg.dictionary_size,
            cfg.seed,
        ),
        Carrier::Radius => TestDictionary::trig_and_bumps(
            cfg.gamma,
            0.0,
            cfg.chart_half_width,
            cfg.dictionary_size,
            cfg.seed,
        ),
    }
}

/// The set with the envelope obstacle in chart terms, plus the bounded
/// global weight.
pub fn build_weighted_set(cfg: &ExperimentConfig) -> Result<(WeightedSet, GridFunction)> {
    let chart = Chart::new(cfg.chart_half_width, cfg.chart_resolution)?;
    let expr = cfg.weight.clone();
    let set = match cfg.gauge {
        Gauge::Flat => WeightedSet::builtin(cfg.shape, chart, move |z| expr.eval(z))?,
        Gauge::Global => WeightedSet::builtin(cfg.shape, chart, move |z| {
            fs_potential_at(z) + expr.eval(z)
        })?,
    };
    let expr = cfg.weight.clone();
    let psi = match cfg.gauge {
        Gauge::Flat => GridFunction::from_fn(chart, move |z| expr.eval(z) - fs_potential_at(z)),
        Gauge::Global => GridFunction::from_fn(chart, move |z| expr.eval(z)),
    };
    Ok((set, psi))
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("[{name}] {m}")),
        Error::Numeric(m) => Error::Numeric(format!("[{name}] {m}")),
        Error::Consistency(m) => Error::Consistency(format!("[{name}] {m}")),
        other => other,
    })
}

pub fn run_equidistribution_study(cfg: &ExperimentConfig) -> Result<EquidistributionStudy> {
    run_equidistribution_study_streamed(cfg, |_| Ok(()))
}

/// Same, but hands each finished row to `on_row` (so callers can persist
/// partial tables when a later stage aborts).
pub fn run_equidistribution_study_streamed(
    cfg: &ExperimentConfig,
    mut on_row: impl FnMut(&RateRow) -> Result<()>,
) -> Result<EquidistributionStudy> {
    let chart = Chart::new(cfg.chart_half_width, cfg.chart_resolution)?;
    let geom = ReferenceGeometry::new(chart);
    let (set, psi) = build_weighted_set(cfg)?;
    let env_params = EnvelopeParams {
        tol: cfg.envelope_tol,
        ..EnvelopeParams::default()
    };
    let sol: EnvelopeSolution = stage("envelope", envelope(&set, &env_params))?;
    let mu_eq = stage("equilibrium-measure", mu_eq_from_solution(&sol))?;
    let e_eq = stage(
        "energy",
        energy_difference(
            &set,
            &psi,
            &geom,
            &EnergyParams {
                envelope: env_params,
                ..EnergyParams::default()
            },
        ),
    )?;
    let carrier = carrier_for(cfg);
    let dict = dictionary_for(cfg, carrier)?;
    let mu_eq_1d = project_to_carrier(&mu_eq, carrier);
    let env_weight = Arc::new(sol.u().clone());

    let mut rows: Vec<RateRow> = Vec::with_capacity(cfg.degrees.len());
    for &p in &cfg.degrees {
        let (basis, ctx) = gauge_pieces(cfg, p);
        let solve_params = FeketeSolveParams {
            exchange: ExchangeParams {
                tol: cfg.exchange_tol,
                max_sweeps: cfg.max_sweeps,
            },
            restarts: cfg.restarts,
            seed: cfg.seed,
        };
        let (config, _report) = stage(
            &format!("fekete p={p}"),
            solve(&set, &basis, &ctx, &solve_params),
        )?;
        let mu_p = config.fekete_measure();
        let w1 = stage(
            &format!("wasserstein p={p}"),
            w1_1d(&mu_p, &mu_eq, carrier),
        )?;
        let dist = dist_gamma_lower(&project_to_carrier(&mu_p, carrier), &mu_eq_1d, &dict);
        let l_p = stage(
            &format!("l_p p={p}"),
            l_p_normalized(&geom, &WeightedNormContext::flat_grid(p, env_weight.clone())),
        )?;
        let dp = stage(&format!("d_p p={p}"), d_p(&geom, &config, &ctx))?;
        let row = RateRow {
            p,
            sigma_p: config.defect().unwrap_or(0.0),
            w1,
            dist_gamma: dist,
            d_p: dp,
            eps_p: (l_p - e_eq).abs(),
            d_plus_e: (dp + e_eq).abs(),
        };
        on_row(&row)?;
        rows.push(row);
    }
    let w1_pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.p as f64, r.w1)).collect();
    let w1_slope = fit_rate(&w1_pairs).map(|f| f.slope).unwrap_or(f64::NAN);
    let dist_pairs: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.dist_gamma > 0.0)
        .map(|r| (r.p as f64, r.dist_gamma))
        .collect();
    let dist_slope = fit_rate(&dist_pairs).map(|f| f.slope).unwrap_or(f64::NAN);
    let csv = rates_csv(&rows);
    let svg = log_log_plot(
        &format!("{}: equidistribution speed", cfg.name),
        "degree p",
        "distance",
        &[
            Series {
                label: "w1",
                color: "steelblue",
                points: w1_pairs,
                slope: Some(w1_slope),
            },
            Series {
                label: "dist_gamma (lower)",
                color: "firebrick",
                points: dist_pairs,
                slope: Some(dist_slope),
            },
        ],
    );
    Ok(EquidistributionStudy {
        rows,
        w1_slope,
        dist_slope,
        e_eq,
        csv,
        svg,
    })
}

fn rates_csv(rows: &[RateRow]) -> String {
    let mut out = String::from("p,sigma_p,w1,dist_gamma,d_p,eps_p,d_plus_e\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.p, r.sigma_p, r.w1, r.dist_gamma, r.d_p, r.eps_p, r.d_plus_e
        ));
    }
    out
}

#[derive(Clone, Debug)]
pub struct BergmanStudy {
    pub rows: Vec<(usize, f64)>,
    pub slope: f64,
    pub zeta: f64,
    pub csv: String,
}

/// Density-convergence ladder for a positively curved global weight.
pub fn run_bergman_study(cfg: &ExperimentConfig, zeta_min: f64) -> Result<BergmanStudy> {
    if cfg.gauge != Gauge::Global {
        return Err(Error::Config(
            "the Bergman study needs a global-gauge weight".into(),
        ));
    }
    let chart = Chart::new(cfg.chart_half_width, cfg.chart_resolution)?;
    let geom = ReferenceGeometry::new(chart);
    let expr = cfg.weight.clone();
    let expr_l = cfg.weight.clone();
    let mut weight = AnalyticWeight::new(
        move |z| expr.eval(z),
        move |z| expr_l.laplacian(z),
    );
    if let Some(g) = cfg.weight.radial_profile() {
        weight = weight.with_radial_profile(g);
    }
    let out = density_convergence_experiment(&geom, &weight, &cfg.degrees, zeta_min)?;
    let mut csv = String::from("p,err,slope_so_far\n");
    for k in 0..out.rows.len() {
        let (p, e) = out.rows[k];
        let slope_so_far = if k >= 1 {
            let pts: Vec<(f64, f64)> = out.rows[..=k]
                .iter()
                .map(|&(p, e)| ((p as f64).ln(), e.ln()))
                .collect();
            let n = pts.len() as f64;
            let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
            let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
            let sxx: f64 = pts.iter().map(|q| (q.0 - mx) * (q.0 - mx)).sum();
            let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
            format!("{}", sxy / sxx)
        } else {
            String::new()
        };
        csv.push_str(&format!("{p},{e},{slope_so_far}\n"));
    }
    Ok(BergmanStudy {
        rows: out.rows,
        slope: out.fit.slope,
        zeta: out.zeta,
        csv,
    })
}

/// Write a configuration cache and verify that reading it back and
/// re-writing reproduces the bytes exactly; returns the re-read
/// configuration.
pub fn cache_roundtrip(
    path: &std::path::Path,
    chart: Chart,
    config: &Configuration,
    seed: u64,
    tol: f64,
) -> Result<Configuration> {
    let mut bytes = Vec::new();
    write_configuration(&mut bytes, chart, config, seed, tol)?;
    std::fs::write(path, &bytes)?;
    let file = std::fs::File::open(path)?;
    let (chart2, back, seed2, tol2) = read_configuration(std::io::BufReader::new(file))?;
    let mut again = Vec::new();
    write_configuration(&mut again, chart2, &back, seed2, tol2)?;
    if again != bytes {
        return Err(Error::Consistency(
            "configuration cache round trip is not byte-exact".into(),
        ));
    }
    Ok(back)
}

/// Convenience measure for oracle comparisons: `count` uniform atoms on
/// the unit circle.
pub fn uniform_circle_measure(count: usize) -> DiscreteMeasure {
    let pts: Vec<num_complex::Complex64> = (0..count)
        .map(|k| {
            num_complex::Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (k as f64 + 0.5) / count as f64,
            )
        })
        .collect();
    DiscreteMeasure::uniform_on(&pts)
}
