//! Averages over shrinking discs and the Kiselman–Legendre transform.

use crate::error::{Error, Result};
use crate::model::GridFunction;
use crate::util::gauss_legendre;
use rayon::prelude::*;

/// Radial profile of the disc-average weight: `χ(s) = (e/π)(1-s)^{-2}·e^{1/(s-1)}`
/// for `s < 1`, zero above — normalized so `∫_{|ζ|≤1} χ(|ζ|²) dLeb = 1`
/// (the constant `e/π` is exact: substituting `v = 1/(1-s)` reduces the
/// radial integral to `∫₁^∞ e^{-v} dv = e^{-1}`).
pub fn chi_profile(s: f64) -> f64 {
    if s >= 1.0 {
        return 0.0;
    }
    std::f64::consts::E / std::f64::consts::PI * (1.0 / ((1.0 - s) * (1.0 - s)))
        * (1.0 / (s - 1.0)).exp()
}

const N_RADIAL: usize = 24;
const N_ANGULAR: usize = 32;

fn disc_quadrature() -> Vec<(f64, f64, f64)> {
    // (radius, angle, weight) with weights summing exactly to 1
    let (nodes, weights) = gauss_legendre(N_RADIAL);
    let mut rule = Vec::with_capacity(N_RADIAL * N_ANGULAR);
    let mut total = 0.0;
    for (&x, &w) in nodes.iter().zip(&weights) {
        let r = 0.5 * (x + 1.0);
        let wr = 0.5 * w * chi_profile(r * r) * r * 2.0 * std::f64::consts::PI
            / N_ANGULAR as f64;
        for b in 0..N_ANGULAR {
            let theta = 2.0 * std::f64::consts::PI * (b as f64 + 0.5) / N_ANGULAR as f64;
            rule.push((r, theta, wr));
            total += wr;
        }
    }
    for q in rule.iter_mut() {
        q.2 /= total;
    }
    rule
}

/// `Ψ(z, t)`: the χ-weighted average of `ψ` over the disc of radius `t`
/// around each node (flat-chart version of the exponential-map average).
/// Samples are read bilinearly; requires `2h ≤ t ≤ R/4` so the stencil is
/// resolvable and stays essentially inside the box.
pub fn psi_average(psi: &GridFunction, t: f64) -> Result<GridFunction> {
    let chart = psi.chart();
    let h = chart.spacing();
    if !(2.0 * h <= t && t <= chart.half_width() / 4.0) {
        return Err(Error::Config(format!(
            "averaging radius t = {t} outside [2h, R/4] = [{}, {}]",
            2.0 * h,
            chart.half_width() / 4.0
        )));
    }
    let rule = disc_quadrature();
    let n = chart.side();
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = chart.coords(idx);
            let z = chart.node(j, k);
            let mut acc = 0.0;
            for &(r, theta, w) in &rule {
                let zeta = num_complex::Complex64::from_polar(t * r, theta);
                acc += w * psi.eval(z + zeta);
            }
            acc
        })
        .collect();
    GridFunction::from_values(chart, values)
}

/// The second moment `c_χ = ∫ |ζ|²·χ(|ζ|²) dLeb(ζ)` under the same
/// quadrature — the scale constant in `Ψ(0,t) = c_χ·t²` for `ψ = |z|²`.
pub fn chi_second_moment() -> f64 {
    disc_quadrature()
        .iter()
        .map(|&(r, _, w)| w * r * r)
        .sum()
}

#[derive(Clone, Copy, Debug)]
pub struct KiselmanParams {
    /// Log-penalty coefficient `c > 0`.
    pub c: f64,
    /// Outer scale `δ ∈ [4h, R/4]`.
    pub delta: f64,
    /// Slope compensation `b ≥ 0` (makes `Ψ(z,t) + bt` nondecreasing).
    pub b: f64,
    /// Re-run with a doubled `t`-grid and fail if outputs move ≥ 1e-6.
    pub refinement_check: bool,
}

/// Kiselman–Legendre transform
/// `ψ_{c,δ}(z) = inf_t ( Ψ(z,t) + b·t - b·δ - c·log(t/δ) )`
/// over the geometric grid `t = δ·2^{-k}`, `k = 0..⌈log₂(δ/2h)⌉`.
pub fn kiselman_legendre(
    psi: &GridFunction,
    params: &KiselmanParams,
) -> Result<GridFunction> {
    let out = kiselman_on_grid(psi, params, 1)?;
    if params.refinement_check {
        let fine = kiselman_on_grid(psi, params, 2)?;
        let mut gap: f64 = 0.0;
        for (a, b) in out.values().iter().zip(fine.values()) {
            gap = gap.max((a - b).abs());
        }
        if gap >= 1e-6 {
            return Err(Error::Consistency(format!(
                "Kiselman t-grid is under-resolved: refinement moved the output by {gap:e}"
            )));
        }
    }
    Ok(out)
}

fn kiselman_on_grid(
    psi: &GridFunction,
    params: &KiselmanParams,
    substeps: usize,
) -> Result<GridFunction> {
    let chart = psi.chart();
    let h = chart.spacing();
    let delta = params.delta;
    if !(4.0 * h <= delta && delta <= chart.half_width() / 4.0) {
        return Err(Error::Config(format!(
            "Kiselman scale δ = {delta} outside [4h, R/4]"
        )));
    }
    if !(params.c > 0.0) {
        return Err(Error::Config("Kiselman needs c > 0".into()));
    }
    let k_max = (delta / (2.0 * h)).log2().ceil() as usize;
    let mut out: Option<GridFunction> = None;
    let steps = k_max * substeps;
    for i in 0..=steps {
        let t = delta * 0.5f64.powf(i as f64 / substeps as f64);
        if t < 2.0 * h {
            break;
        }
        let avg = psi_average(psi, t)?;
        let penalty = params.b * t - params.b * delta - params.c * (t / delta).ln();
        let cand = avg.map(|v| v + penalty);
        out = Some(match out {
            None => cand,
            Some(acc) => acc.zip_map(&cand, f64::min),
        });
    }
    out.ok_or_else(|| Error::Config("empty t-grid".into()))
}
