//! Candidate pools for determinant maximization.
//!
//! Fekete points concentrate on the outer boundary of the set, so a plain
//! grid wastes resolution inside.  The pool is the union of
//!
//! * every mask node,
//! * a 4×-refined sub-lattice in the band within `2h` of the set boundary
//!   (still satisfying the defining inequality), and
//! * a trace of the analytic boundary itself, sampled at arclength step
//!   `h/8` — without exact boundary candidates the first-order radial loss
//!   of an off-boundary point would dominate every optimality check.
//!
//! The pool is sorted by `(Re, Im)`, which makes "lowest index" the
//! deterministic tie-break everywhere downstream.

use crate::model::{SetShape, WeightedSet};
use num_complex::Complex64;

/// Sorted, deduplicated candidate points for a weighted set.
#[derive(Clone, Debug)]
pub struct CandidatePool {
    points: Vec<Complex64>,
}

impl CandidatePool {
    /// Pool from explicit points (testing and custom experiments).
    pub fn from_points(mut pts: Vec<Complex64>) -> Self {
        pts.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        pts.dedup_by(|a, b| a == b);
        CandidatePool { points: pts }
    }

    pub fn build(set: &WeightedSet) -> Self {
        let chart = set.chart();
        let h = chart.spacing();

        // The interval is rasterized as a one-cell strip for the PDE
        // solvers, but the maximization lives on the true segment: its pool
        // is the real-axis nodes plus the 1-D trace, nothing off-axis.
        if set.shape() == SetShape::Interval {
            let mut pts: Vec<Complex64> =
                set.nodes().into_iter().filter(|z| z.im == 0.0).collect();
            pts.extend(boundary_trace(set.shape(), h));
            return Self::from_points(pts);
        }

        let mut pts: Vec<Complex64> = set.nodes();

        // refined sub-lattice near the boundary
        if set.shape() != SetShape::WholeChart {
            let fine = h / 4.0;
            let band = 2.0 * h;
            let r = chart.half_width();
            let n_fine = (2.0 * r / fine).round() as i64;
            for j in 0..=n_fine {
                let x = -r + j as f64 * fine;
                for k in 0..=n_fine {
                    let y = -r + k as f64 * fine;
                    let z = Complex64::new(x, y);
                    if boundary_distance(set.shape(), z, h) <= band
                        && set.shape().contains(z, h)
                    {
                        pts.push(z);
                    }
                }
            }
            pts.extend(boundary_trace(set.shape(), h));
        }

        pts.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        pts.dedup_by(|a, b| a == b);
        CandidatePool { points: pts }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Distance from `z` to the set boundary (rough, for band selection).
fn boundary_distance(shape: SetShape, z: Complex64, h: f64) -> f64 {
    match shape {
        SetShape::UnitDisc => (z.norm() - 1.0).abs(),
        SetShape::Interval => {
            if z.im.abs() > 0.5 * h {
                f64::INFINITY
            } else {
                (z.re.abs() - 1.0).abs().min(z.im.abs())
            }
        }
        SetShape::Annulus(r) => (z.norm() - 1.0).abs().min((z.norm() - r).abs()),
        SetShape::Square => {
            let dx = 1.0 - z.re.abs();
            let dy = 1.0 - z.im.abs();
            dx.min(dy)
        }
        SetShape::WholeChart => f64::INFINITY,
    }
}

/// Points exactly on the analytic boundary, spaced ~`h/8` in arclength.
fn boundary_trace(shape: SetShape, h: f64) -> Vec<Complex64> {
    let step = h / 8.0;
    match shape {
        SetShape::UnitDisc => circle_trace(1.0, step),
        SetShape::Annulus(r) => {
            let mut pts = circle_trace(1.0, step);
            pts.extend(circle_trace(r, step));
            pts
        }
        SetShape::Interval => {
            // the true one-dimensional carrier, endpoints exact
            let count = (2.0 / step).ceil() as usize;
            (0..=count)
                .map(|i| Complex64::new(-1.0 + 2.0 * i as f64 / count as f64, 0.0))
                .collect()
        }
        SetShape::Square => {
            let count = (2.0 / step).ceil() as usize;
            let mut pts = Vec::with_capacity(4 * count);
            for i in 0..count {
                let t = -1.0 + 2.0 * i as f64 / count as f64;
                pts.push(Complex64::new(t, -1.0));
                pts.push(Complex64::new(1.0, t));
                pts.push(Complex64::new(-t, 1.0));
                pts.push(Complex64::new(-1.0, -t));
            }
            pts
        }
        SetShape::WholeChart => Vec::new(),
    }
}

/// Equally spaced circle points; the count is rounded up to a multiple of
/// 8 so that small roots-of-unity configurations exist exactly in the pool.
fn circle_trace(radius: f64, step: f64) -> Vec<Complex64> {
    let raw = (2.0 * std::f64::consts::PI * radius / step).ceil() as usize;
    let count = raw.div_ceil(8) * 8;
    (0..count)
        .map(|i| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * i as f64 / count as f64))
        .collect()
}
