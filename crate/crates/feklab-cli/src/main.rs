//! Command-line laboratory: Fekete solves, equilibrium envelopes, Bergman
//! densities, functional reports and end-to-end rate studies.

use clap::{Args, Parser, Subcommand};
use feklab::envelope::{envelope, ma_measure, EnvelopeParams};
use feklab::error::{Error, Result};
use feklab::fekete::{solve, ExchangeParams, FeketeSolveParams};
use feklab::functionals::{gap_report, EnergyParams};
use feklab::model::io::{format_hex_f64, write_grid_function};
use feklab::model::{Chart, ReferenceGeometry};
use feklab::polyspace::GramQuadrature;
use feklab_cli::config::{ExperimentConfig, FlatConfig, Gauge};
use feklab_cli::study::{
    build_weighted_set, cache_roundtrip, run_bergman_study, run_equidistribution_study_streamed,
};
use feklab_cli::{config, expr::WeightExpr, exit_code};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "feklab", version, about = "Fekete points and equilibrium measures laboratory")]
struct Cli {
    /// Rayon thread-pool size (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ChartArgs {
    /// Chart half-width R (box [-R, R]²).
    #[arg(long = "chart-r", default_value_t = 2.0)]
    chart_r: f64,
    /// Chart resolution M (grid (2M+1)²; spacing R/M).
    #[arg(long = "chart-m", default_value_t = 128)]
    chart_m: usize,
}

#[derive(Args, Clone)]
struct WeightArgs {
    /// Weight expression over x, y, r2, fs (see the guide's grammar).
    #[arg(long, default_value = "0")]
    weight: String,
    /// Gauge of the weight: 'flat' (chart polynomials) or 'global'.
    #[arg(long, default_value = "flat")]
    gauge: String,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the weighted Vandermonde determinant over a set.
    Fekete {
        #[command(subcommand)]
        verb: FeketeVerb,
    },
    /// Equilibrium potentials by the obstacle problem.
    Envelope {
        #[command(subcommand)]
        verb: EnvelopeVerb,
    },
    /// Bergman densities.
    Bergman {
        #[command(subcommand)]
        verb: BergmanVerb,
    },
    /// Volume/energy functional reports.
    Functionals {
        #[command(subcommand)]
        verb: FunctionalsVerb,
    },
    /// Equidistribution-rate studies.
    Rates {
        #[command(subcommand)]
        verb: RatesVerb,
    },
}

#[derive(Subcommand)]
enum FeketeVerb {
    Solve {
        /// Set name: unit-disc, interval, annulus:<r>, square, whole-chart.
        #[arg(long)]
        set: String,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        weight: WeightArgs,
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        /// Per-sweep gain tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Configuration cache to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EnvelopeVerb {
    Compute {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        weight: WeightArgs,
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Envelope grid CSV to write.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Monge–Ampère cell-mass CSV to write.
        #[arg(long)]
        ma_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BergmanVerb {
    Density {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        chart: ChartArgs,
        /// Density grid CSV to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density-convergence ladder for a positively curved global weight.
    Study {
        #[command(flatten)]
        weight: WeightArgs,
        /// Degree ladder, comma separated.
        #[arg(long, default_value = "8,16,32,64")]
        degrees: String,
        #[command(flatten)]
        chart: ChartArgs,
        /// Required certified curvature lower bound.
        #[arg(long, default_value_t = 0.0)]
        zeta_min: f64,
        /// Table CSV to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FunctionalsVerb {
    Report {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RatesVerb {
    Run {
        /// Built-in experiment name (disc-flat, interval-flat, x-positive).
        #[arg(long, conflicts_with = "config")]
        experiment: Option<String>,
        /// Config file (flat key = value format).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the degree ladder, comma separated.
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Rates CSV to write (rows appended as they complete).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Log-log SVG to write.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn experiment_from_args(
    set: &str,
    weight: &WeightArgs,
    chart: &ChartArgs,
    degrees: Vec<usize>,
    seed: u64,
) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        name: format!("{set}"),
        shape: config::parse_set_shape(set)?,
        weight: WeightExpr::parse(&weight.weight)?,
        gauge: Gauge::parse(&weight.gauge)?,
        degrees,
        chart_half_width: chart.chart_r,
        chart_resolution: chart.chart_m,
        gamma: 2.0,
        envelope_tol: 1e-9,
        exchange_tol: 1e-9,
        max_sweeps: 200,
        restarts: 0,
        seed,
        dictionary_size: 256,
        csv_path: None,
        svg_path: None,
    })
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Fekete {
            verb:
                FeketeVerb::Solve {
                    set,
                    degree,
                    weight,
                    chart,
                    seed,
                    restarts,
                    tol,
                    out,
                },
        } => {
            let mut cfg = experiment_from_args(&set, &weight, &chart, vec![degree], seed)?;
            cfg.restarts = restarts;
            cfg.exchange_tol = tol;
            let (wset, _) = build_weighted_set(&cfg)?;
            let (basis, ctx) = feklab_cli::study::gauge_pieces(&cfg, degree);
            let params = FeketeSolveParams {
                exchange: ExchangeParams {
                    tol,
                    ..ExchangeParams::default()
                },
                restarts,
                seed,
            };
            let (config, report) = solve(&wset, &basis, &ctx, &params)?;
            println!(
                "degree {degree}: log_w = {:.12}, {} points, {} sweeps, {} exchanges, pool {}",
                config.log_w(),
                config.points().len(),
                report.iterations,
                report.exchanges_accepted,
                report.candidate_count
            );
            if let Some(path) = out {
                let back = cache_roundtrip(&path, wset.chart(), &config, seed, tol)?;
                println!(
                    "wrote {} ({} points, bit-exact round trip)",
                    path.display(),
                    back.points().len()
                );
            }
            Ok(())
        }
        Command::Envelope {
            verb:
                EnvelopeVerb::Compute {
                    set,
                    weight,
                    chart,
                    tol,
                    out,
                    ma_out,
                },
        } => {
            let cfg = experiment_from_args(&set, &weight, &chart, vec![1], 0)?;
            let (wset, _) = build_weighted_set(&cfg)?;
            let params = EnvelopeParams {
                tol,
                ..EnvelopeParams::default()
            };
            let sol = envelope(&wset, &params)?;
            println!(
                "envelope: {} sweeps, residual {:.3e}, far-field constant {:.9}",
                sol.sweeps(),
                sol.residual(),
                sol.robin_constant()
            );
            if let Some(path) = out {
                let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
                write_grid_function(&mut f, sol.u())?;
                println!("wrote {}", path.display());
            }
            if let Some(path) = ma_out {
                let ma = ma_measure(&sol)?;
                let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
                write_ma_cells(&mut f, wset.chart(), &ma)?;
                println!("wrote {} (total mass {:.6})", path.display(), ma.total());
            }
            Ok(())
        }
        Command::Bergman {
            verb:
                BergmanVerb::Density {
                    weight,
                    degree,
                    chart,
                    out,
                },
        } => {
            let gauge = Gauge::parse(&weight.gauge)?;
            if gauge != Gauge::Global {
                return Err(Error::Config(
                    "bergman density expects a global-gauge weight".into(),
                ));
            }
            let chart = Chart::new(chart.chart_r, chart.chart_m)?;
            let geom = ReferenceGeometry::new(chart);
            let expr = WeightExpr::parse(&weight.weight)?;
            let e2 = expr.clone();
            let ctx = feklab::polyspace::WeightedNormContext::fs_fn(degree, move |z| e2.eval(z));
            let rho = match expr.radial_profile() {
                Some(g) => feklab::bergman::bergman_function(
                    chart,
                    &GramQuadrature::FsGlobalRadial {
                        geom: &geom,
                        psi_radial: &g,
                    },
                    &ctx,
                )?,
                None => feklab::bergman::bergman_function(
                    chart,
                    &GramQuadrature::FsGlobal(&geom),
                    &ctx,
                )?,
            };
            println!(
                "degree {degree}: sup rho = {:.6}, dim = {}",
                rho.sup(),
                rho.dim()
            );
            if let Some(path) = out {
                let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
                write_grid_function(&mut f, rho.rho())?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Bergman {
            verb:
                BergmanVerb::Study {
                    weight,
                    degrees,
                    chart,
                    zeta_min,
                    out,
                },
        } => {
            let ds: Vec<usize> = degrees
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Config(format!("bad degree '{s}'")))
                })
                .collect::<Result<_>>()?;
            let mut cfg = experiment_from_args("whole-chart", &weight, &chart, ds, 0)?;
            cfg.gauge = Gauge::Global;
            let study = run_bergman_study(&cfg, zeta_min)?;
            print!("{}", study.csv);
            println!("# certified zeta {:.4}, fitted slope {:.4}", study.zeta, study.slope);
            if let Some(path) = out {
                std::fs::write(&path, study.csv.as_bytes())?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Functionals {
            verb:
                FunctionalsVerb::Report {
                    set,
                    weight,
                    degree,
                    chart,
                    seed,
                    out,
                },
        } => {
            let cfg = experiment_from_args(&set, &weight, &chart, vec![degree], seed)?;
            let chart = Chart::new(cfg.chart_half_width, cfg.chart_resolution)?;
            let geom = ReferenceGeometry::new(chart);
            let (wset, psi) = build_weighted_set(&cfg)?;
            let sol = envelope(&wset, &EnvelopeParams::default())?;
            let (basis, ctx) = feklab_cli::study::gauge_pieces(&cfg, degree);
            let (config, _) = solve(&wset, &basis, &ctx, &FeketeSolveParams::default())?;
            let report = gap_report(
                &wset,
                &psi,
                &sol,
                &geom,
                &config,
                &ctx,
                &EnergyParams::default(),
            )?;
            let line = format!(
                "p,l_p_mu0,l_p_k_lower,l_p_k_upper,e_eq,d_p,eps_p,d_plus_e\n{},{},{},{},{},{},{},{}\n",
                report.p,
                report.l_p_mu0,
                report.l_p_k_bracket.0,
                report.l_p_k_bracket.1,
                report.e_eq,
                report.d_p,
                report.eps_p,
                report.d_plus_e
            );
            print!("{line}");
            if let Some(path) = out {
                std::fs::write(&path, line)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Rates {
            verb:
                RatesVerb::Run {
                    experiment,
                    config: config_path,
                    degrees,
                    seed,
                    out,
                    svg,
                },
        } => {
            let mut cfg = match (experiment, config_path) {
                (Some(name), None) => ExperimentConfig::builtin(&name)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)?;
                    ExperimentConfig::from_flat(&FlatConfig::parse(&text)?)?
                }
                _ => {
                    return Err(Error::Config(
                        "pass exactly one of --experiment or --config".into(),
                    ))
                }
            };
            if let Some(ds) = degrees {
                cfg.degrees = ds
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Config(format!("bad degree '{s}'")))
                    })
                    .collect::<Result<_>>()?;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let csv_path = out.or_else(|| cfg.csv_path.clone().map(PathBuf::from));
            let svg_path = svg.or_else(|| cfg.svg_path.clone().map(PathBuf::from));
            // stream rows so a mid-study failure still leaves a partial CSV
            let mut csv_file = match &csv_path {
                Some(p) => {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
                    writeln!(f, "p,sigma_p,w1,dist_gamma,d_p,eps_p,d_plus_e")?;
                    Some(f)
                }
                None => None,
            };
            let study = run_equidistribution_study_streamed(&cfg, |row| {
                println!(
                    "p={}: w1={:.6e}, dist_gamma={:.6e}, d_p={:.6}, eps_p={:.3e}",
                    row.p, row.w1, row.dist_gamma, row.d_p, row.eps_p
                );
                if let Some(f) = csv_file.as_mut() {
                    writeln!(
                        f,
                        "{},{},{},{},{},{},{}",
                        row.p, row.sigma_p, row.w1, row.dist_gamma, row.d_p, row.eps_p, row.d_plus_e
                    )?;
                    f.flush()?;
                }
                Ok(())
            })?;
            println!(
                "w1 slope {:.4}, dist_gamma slope {:.4}, E_eq {:.6}",
                study.w1_slope, study.dist_slope, study.e_eq
            );
            if let Some(p) = svg_path {
                std::fs::write(&p, study.svg.as_bytes())?;
                println!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn write_ma_cells(
    w: &mut impl Write,
    chart: Chart,
    ma: &feklab::envelope::MAMeasure,
) -> Result<()> {
    writeln!(w, "format_version,chart_R,chart_M")?;
    writeln!(
        w,
        "1,{},{}",
        format_hex_f64(chart.half_width()),
        chart.resolution()
    )?;
    writeln!(w, "j,k,mass")?;
    for &(z, m) in ma.measure().atoms() {
        let (j, k) = chart.nearest(z);
        writeln!(w, "{j},{k},{}", format_hex_f64(m))?;
    }
    Ok(())
}
