//! Radial mollification on the grid.

use crate::error::{Error, Result};
use crate::model::GridFunction;

/// Number of border nodes left untouched by [`mollify`] at scale `δ`.
pub fn mollify_margin(h: f64, delta: f64) -> usize {
    (delta / h).ceil() as usize
}

/// Discrete convolution with the radial bump
/// `ρ_δ(z) = 3/(π δ²)·(1 - |z/δ|²)²` supported in `|z| ≤ δ`.
///
/// Stencil weights are symmetrized by construction and normalized to sum
/// exactly to one, so affine functions are reproduced to rounding on the
/// δ-interior; nodes closer than δ to the box edge keep their original
/// values.  Requires `δ ≥ 2h` so the stencil has interior structure.
pub fn mollify(u: &GridFunction, delta: f64) -> Result<GridFunction> {
    let chart = u.chart();
    let h = chart.spacing();
    if delta < 2.0 * h {
        return Err(Error::Config(format!(
            "mollification scale δ = {delta} is below 2h = {}",
            2.0 * h
        )));
    }
    let m = mollify_margin(h, delta) as isize;
    // stencil over the square [-m, m]², clipped to the disc
    let mut stencil: Vec<(isize, isize, f64)> = Vec::new();
    let mut mass = 0.0;
    for a in -m..=m {
        for b in -m..=m {
            let r2 = ((a * a + b * b) as f64) * h * h / (delta * delta);
            if r2 < 1.0 {
                let w = (1.0 - r2) * (1.0 - r2);
                stencil.push((a, b, w));
                mass += w;
            }
        }
    }
    for s in stencil.iter_mut() {
        s.2 /= mass;
    }
    let n = chart.side() as isize;
    let mut out = u.clone();
    for j in m..n - m {
        for k in m..n - m {
            let mut acc = 0.0;
            for &(a, b, w) in &stencil {
                acc += w * u.get((j + a) as usize, (k + b) as usize);
            }
            out.set(j as usize, k as usize, acc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Chart;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn affine_functions_are_fixed_points() {
        let chart = Chart::new(2.0, 48).unwrap();
        let u = GridFunction::from_fn(chart, |z| 0.7 * z.re - 1.3 * z.im + 0.25);
        let v = mollify(&u, 0.25).unwrap();
        let m = mollify_margin(chart.spacing(), 0.25);
        let n = chart.side();
        for j in m..n - m {
            for k in m..n - m {
                assert!((u.get(j, k) - v.get(j, k)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn lipschitz_ladder_exponent() {
        // u(z) = |z| is C^{0,1}: sup|u_δ - u| ≲ δ, fitted exponent ≥ 0.9
        let chart = Chart::new(2.0, 128).unwrap();
        let u = GridFunction::from_fn(chart, |z| z.norm());
        let mut pts = Vec::new();
        for i in 0..5 {
            let delta = 0.4 * 0.7f64.powi(i);
            let v = mollify(&u, delta).unwrap();
            let m = mollify_margin(chart.spacing(), 0.4);
            let n = chart.side();
            let mut sup: f64 = 0.0;
            for j in m..n - m {
                for k in m..n - m {
                    sup = sup.max((u.get(j, k) - v.get(j, k)).abs());
                }
            }
            pts.push((delta, sup));
        }
        let fit = crate::metrics::fit_rate(&pts).unwrap();
        assert!(fit.slope >= 0.9, "fitted exponent {}", fit.slope);
    }

    #[test]
    fn subharmonic_functions_increase_and_order_in_delta() {
        let chart = Chart::new(2.0, 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            // random subharmonic sample: Σ a_i log|z - c_i| with a_i ≥ 0 and
            // poles outside the box
            let terms: Vec<(f64, num_complex::Complex64)> = (0..4)
                .map(|_| {
                    (
                        rng.gen_range(0.1..1.0),
                        num_complex::Complex64::from_polar(
                            rng.gen_range(3.0..6.0),
                            rng.gen_range(0.0..6.28),
                        ),
                    )
                })
                .collect();
            let u = GridFunction::from_fn(chart, |z| {
                terms.iter().map(|&(a, c)| a * (z - c).norm().ln()).sum()
            });
            let v1 = mollify(&u, 0.15).unwrap();
            let v2 = mollify(&u, 0.3).unwrap();
            let m = mollify_margin(chart.spacing(), 0.3);
            let n = chart.side();
            for j in m..n - m {
                for k in m..n - m {
                    // sub-mean-value: u_δ ≥ u, and u_δ increasing in δ
                    assert!(v1.get(j, k) >= u.get(j, k) - 1e-8);
                    assert!(v2.get(j, k) >= v1.get(j, k) - 1e-8);
                }
            }
        }
    }
}
