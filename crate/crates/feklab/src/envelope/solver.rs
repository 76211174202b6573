//! Obstacle-problem solver for equilibrium potentials.
//!
//! Given a weighted set `(K, φ)` (flat-gauge weight), the solver computes
//! the largest subharmonic function `s` on the chart with `s ≤ φ` on `K`
//! and far-field behaviour `s(z) = log|z| + c`.  In the global picture this
//! is the equilibrium weight shifted by the reference potential:
//! `s = P_K(φ - ρ₀) + ρ₀`, so `s - ρ₀` is the bounded ω₀-psh equilibrium
//! weight of the Fubini–Study weight `φ - ρ₀`.
//!
//! Discretization: projected Gauss–Seidel/SOR with checkerboard sweeps on
//! the 5-point Laplacian.  The outer Dirichlet data is `log|z| + c` on the
//! box edge, with the constant `c` re-estimated during the iteration from
//! the angular mean of `s - log|z|` on a ring near the edge; since the
//! measured mean responds affinely to `c`, a secant step solves the
//! consistency equation in a few outer rounds.

use crate::error::{Error, Result};
use crate::model::{Chart, GridFunction, WeightedSet};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_SWEEPS: usize = 200_000;
const ROBIN_SELF_CONSISTENCY: f64 = 1e-8;

/// SOR over-relaxation.  `Auto` picks `2/(1 + sin(π/(side-1)))` per grid,
/// which keeps the sweep count proportional to the side length; a fixed
/// factor like 1.8 needs an order of magnitude more sweeps on fine grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relaxation {
    Auto,
    Fixed(f64),
}

impl Relaxation {
    fn factor(&self, side: usize) -> f64 {
        match *self {
            Relaxation::Auto => 2.0 / (1.0 + (std::f64::consts::PI / (side - 1) as f64).sin()),
            Relaxation::Fixed(w) => w,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnvelopeParams {
    /// Sweep-to-sweep sup-change below which the inner iteration stops.
    pub tol: f64,
    pub max_sweeps: usize,
    pub relaxation: Relaxation,
    /// Solve coarsened copies of the problem first and prolong the result;
    /// cuts fine-grid sweeps several-fold.  Applies to built-in shapes.
    pub cascade: bool,
}

impl Default for EnvelopeParams {
    fn default() -> Self {
        EnvelopeParams {
            tol: DEFAULT_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            relaxation: Relaxation::Auto,
            cascade: true,
        }
    }
}

/// Converged envelope with its complementarity residual.
#[derive(Clone, Debug)]
pub struct EnvelopeSolution {
    u: GridFunction,
    residual: f64,
    robin_constant: f64,
    sweeps: usize,
    boundary_rule: String,
    edge_masked: bool,
}

impl EnvelopeSolution {
    /// The equilibrium potential `s` on the chart (flat gauge).
    pub fn u(&self) -> &GridFunction {
        &self.u
    }

    /// The bounded equilibrium weight `s - ρ₀` (Fubini–Study gauge).
    pub fn fs_weight(&self) -> GridFunction {
        GridFunction::from_fn(self.u.chart(), |z| {
            self.u.eval(z) - crate::model::fs_potential_at(z)
        })
    }

    /// Max violation of the discrete complementarity conditions.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Far-field constant `c` in `s = log|z| + c`.
    pub fn robin_constant(&self) -> f64 {
        self.robin_constant
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn boundary_rule(&self) -> &str {
        &self.boundary_rule
    }

    /// True when the set mask reaches the box edge (whole-model sets): a
    /// share of the Monge–Ampère mass then lives outside the grid.
    pub fn edge_masked(&self) -> bool {
        self.edge_masked
    }
}

struct Workspace {
    n: usize,
    values: Vec<f64>,
    obstacle: Vec<f64>, // +inf off the mask
    ring: Vec<(usize, f64)>,
    free_edge: Vec<(usize, f64)>, // unmasked boundary node, log|z|
}

impl Workspace {
    fn new(set: &WeightedSet, init: Option<&GridFunction>) -> Self {
        let chart = set.chart();
        let n = chart.side();
        let h = chart.spacing();
        let r = chart.half_width();
        let mut obstacle = vec![f64::INFINITY; n * n];
        for (j, k, _) in chart.iter_nodes() {
            if set.contains_node(j, k) {
                obstacle[chart.index(j, k)] = set.weight().get(j, k);
            }
        }
        // ring for the far-field constant: |z| within one cell of R - 2h
        let r_ring = r - 2.0 * h;
        let mut ring = Vec::new();
        let mut free_edge = Vec::new();
        for (j, k, z) in chart.iter_nodes() {
            let d = z.norm();
            if (d - r_ring).abs() <= 0.5 * h {
                ring.push((chart.index(j, k), d.ln()));
            }
            if !chart.is_interior(j, k) && !set.contains_node(j, k) {
                free_edge.push((chart.index(j, k), d.ln()));
            }
        }
        // initial iterate: the prolonged coarse solution if present,
        // otherwise obstacle on K and a log cone elsewhere
        let min_obs = obstacle
            .iter()
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, |m, &v| m.min(v));
        let values: Vec<f64> = chart
            .iter_nodes()
            .map(|(j, k, z)| {
                let idx = chart.index(j, k);
                let guess = match init {
                    Some(coarse) => coarse.eval(z),
                    None if obstacle[idx].is_finite() => obstacle[idx],
                    None => min_obs + z.norm().max(1.0).ln(),
                };
                guess.min(obstacle[idx])
            })
            .collect();
        Workspace {
            n,
            values,
            obstacle,
            ring,
            free_edge,
        }
    }

    /// Masked boundary nodes carry the obstacle (contact at the box edge is
    /// assumed for whole-chart sets); unmasked ones carry `log|z| + c`.
    fn apply_boundary(&mut self, c: f64) {
        for &(idx, logz) in &self.free_edge {
            self.values[idx] = logz + c;
        }
    }

    fn ring_mean(&self) -> f64 {
        let s: f64 = self
            .ring
            .iter()
            .map(|&(idx, logz)| self.values[idx] - logz)
            .sum();
        s / self.ring.len() as f64
    }

    /// One checkerboard PSOR sweep; returns the sup change.
    fn sweep(&mut self, omega: f64) -> f64 {
        let n = self.n;
        let mut change: f64 = 0.0;
        for color in 0..2 {
            for j in 1..n - 1 {
                let row = j * n;
                let start = 1 + ((j + color) % 2 == 0) as usize;
                let mut k = start;
                while k < n - 1 {
                    let idx = row + k;
                    let avg = 0.25
                        * (self.values[idx - 1]
                            + self.values[idx + 1]
                            + self.values[idx - n]
                            + self.values[idx + n]);
                    let old = self.values[idx];
                    let mut new = old + omega * (avg - old);
                    let obs = self.obstacle[idx];
                    if new > obs {
                        new = obs;
                    }
                    self.values[idx] = new;
                    change = change.max((new - old).abs());
                    k += 2;
                }
            }
        }
        change
    }

    /// Complementarity residual of the current iterate.
    fn residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 1..n - 1 {
            for k in 1..n - 1 {
                let idx = j * n + k;
                let lap = self.values[idx - 1] + self.values[idx + 1] + self.values[idx - n]
                    + self.values[idx + n]
                    - 4.0 * self.values[idx];
                // subharmonicity: discrete cell mass must be ≥ -tiny
                worst = worst.max((-lap).max(0.0) / (2.0 * std::f64::consts::PI));
                let gap = self.obstacle[idx] - self.values[idx];
                if gap > 0.0 {
                    // off the contact set the function must be harmonic
                    worst = worst.max(
                        (lap.abs() / (2.0 * std::f64::consts::PI)).min(gap),
                    );
                }
            }
        }
        worst
    }
}

/// Solve the obstacle problem for the weighted set `(K, φ)`.
pub fn envelope(set: &WeightedSet, params: &EnvelopeParams) -> Result<EnvelopeSolution> {
    set.check_degree_support(1)?;
    let m = set.chart().resolution();
    if !params.cascade || m < 64 {
        return solve_level(set, params, None, 0.0);
    }
    // coarse-to-fine cascade: M/4 → M/2 → M
    let mut levels = vec![m];
    let mut cur = m;
    while cur / 2 >= 32 && levels.len() < 3 {
        cur /= 2;
        levels.push(cur);
    }
    levels.reverse();
    let fine_weight = set.weight().clone();
    let mut carried: Option<(GridFunction, f64)> = None;
    for (i, &lev) in levels.iter().enumerate() {
        let last = i + 1 == levels.len();
        let level_set = if last {
            set.clone()
        } else {
            let chart = Chart::new(set.chart().half_width(), lev)?;
            WeightedSet::builtin(set.shape(), chart, |z| fine_weight.eval(z))?
        };
        let sol = match &carried {
            None => solve_level(&level_set, params, None, 0.0)?,
            Some((u, c)) => solve_level(&level_set, params, Some(u), *c)?,
        };
        if last {
            return Ok(sol);
        }
        carried = Some((sol.u, sol.robin_constant));
    }
    unreachable!("cascade always ends on the finest level")
}

fn solve_level(
    set: &WeightedSet,
    params: &EnvelopeParams,
    init: Option<&GridFunction>,
    c0: f64,
) -> Result<EnvelopeSolution> {
    let mut ws = Workspace::new(set, init);
    if ws.ring.is_empty() {
        return Err(Error::Config("chart too coarse for the far-field ring".into()));
    }
    let free_boundary = !ws.free_edge.is_empty();
    let mut c = c0;
    ws.apply_boundary(c);
    let mut prev_probe: Option<(f64, f64)> = None; // (c, measured mean)
    let mut sweeps = 0usize;
    let omega = params.relaxation.factor(set.chart().side());
    // The far-field constant is only re-estimated from a *converged* inner
    // state; mid-iteration ring measurements are too noisy for the secant.
    // Early rounds converge at a loose tolerance, the last one at full.
    let mut inner_tol = (params.tol * 1e3).min(1e-6).max(params.tol);
    let mut outer_rounds = 0usize;
    loop {
        loop {
            let change = ws.sweep(omega);
            sweeps += 1;
            if change < inner_tol {
                break;
            }
            if sweeps >= params.max_sweeps {
                let residual = ws.residual();
                return Err(Error::Numeric(format!(
                    "envelope did not converge in {sweeps} sweeps \
                     (last change {change:e}, residual {residual:e})"
                )));
            }
        }
        let m = ws.ring_mean();
        outer_rounds += 1;
        if free_boundary && (m - c).abs() >= ROBIN_SELF_CONSISTENCY && outer_rounds < 40 {
            // secant step on the affine consistency map c ↦ m(c)
            let c_next = match prev_probe {
                Some((cp, mp)) if (c - cp).abs() > 1e-13 => {
                    let slope = (m - mp) / (c - cp);
                    if slope.is_finite() && slope < 0.999 {
                        (m - slope * c) / (1.0 - slope)
                    } else {
                        m
                    }
                }
                _ => m,
            };
            prev_probe = Some((c, m));
            c = c_next;
            ws.apply_boundary(c);
            continue;
        }
        if inner_tol > params.tol {
            inner_tol = params.tol;
            continue;
        }
        if !free_boundary {
            c = m;
        }
        break;
    }
    let residual = ws.residual();
    let edge_masked = !free_boundary;
    let values = std::mem::take(&mut ws.values);
    Ok(EnvelopeSolution {
        u: GridFunction::from_values(set.chart(), values)?,
        residual,
        robin_constant: c,
        sweeps,
        boundary_rule: if edge_masked {
            "obstacle values on the box edge (mask reaches the edge)".to_string()
        } else {
            format!("log|z| + c on the box edge, c = {c:.9} by ring secant")
        },
        edge_masked,
    })
}


#[cfg(test)]
mod bench {
    use super::*;
    use crate::model::{Chart, SetShape, WeightedSet};

    #[test]
    #[ignore = "timing probe"]
    fn disc_envelope_m256_timing() {
        let chart = Chart::new(4.0, 256).unwrap();
        let set = WeightedSet::builtin(SetShape::UnitDisc, chart, |_| 0.0).unwrap();
        let t0 = std::time::Instant::now();
        let sol = envelope(&set, &EnvelopeParams::default()).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        let mut sup_err: f64 = 0.0;
        for (j, k, z) in chart.iter_nodes() {
            sup_err = sup_err.max((sol.u().get(j, k) - z.norm().max(1.0).ln()).abs());
        }
        eprintln!(
            "M=256: {dt:.2}s, {} sweeps, sup err {sup_err:.2e}, c = {:.2e}, residual {:.2e}",
            sol.sweeps(),
            sol.robin_constant(),
            sol.residual()
        );
    }
}
