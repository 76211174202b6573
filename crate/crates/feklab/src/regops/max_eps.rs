//! The regularized maximum function.

use super::kernel::SmoothingKernel;
use crate::error::{Error, Result};
use crate::util::gauss_legendre;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `max_ε(t) = ∫ max_i(t_i + h_i)·Π θ(h_i/ε)/ε dh` by tensor-product
/// Gauss quadrature (32 nodes per axis), for up to three arguments.
/// Use [`max_eps_mc`] beyond that.
pub fn max_eps(t: &[f64], eps: f64) -> Result<f64> {
    if t.is_empty() {
        return Err(Error::Config("regularized max needs at least one argument".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Config(format!("regularized max needs ε > 0, got {eps}")));
    }
    if t.len() > 3 {
        return Err(Error::Config(
            "tensor quadrature supports at most 3 arguments; use max_eps_mc".into(),
        ));
    }
    let kernel = SmoothingKernel::polynomial_bump();
    let (nodes, weights) = gauss_legendre(32);
    // substitute h_i = ε·u_i: the ε factors cancel against the dilation
    let l = t.len();
    let mut idx = vec![0usize; l];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        let mut m = f64::NEG_INFINITY;
        for (d, &i) in idx.iter().enumerate() {
            w *= weights[i] * kernel.eval(nodes[i]);
            m = m.max(t[d] + eps * nodes[i]);
        }
        total += w * m;
        // odometer over the l-fold tensor grid
        let mut d = 0;
        loop {
            if d == l {
                return Ok(total);
            }
            idx[d] += 1;
            if idx[d] < nodes.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Monte-Carlo evaluation for more than three arguments; the seed is part
/// of the call so results are reproducible.
pub fn max_eps_mc(t: &[f64], eps: f64, samples: usize, seed: u64) -> Result<f64> {
    if t.is_empty() || !(eps > 0.0) {
        return Err(Error::Config("bad arguments to the regularized max".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kernel = SmoothingKernel::polynomial_bump();
    let mut total = 0.0;
    for _ in 0..samples {
        let mut m = f64::NEG_INFINITY;
        for &ti in t {
            // rejection sampling from θ (bounded by 15/16 on [-1,1])
            let h = loop {
                let x: f64 = rng.gen_range(-1.0..1.0);
                let y: f64 = rng.gen_range(0.0..(15.0 / 16.0));
                if y <= kernel.eval(x) {
                    break x;
                }
            };
            m = m.max(ti + eps * h);
        }
        total += m;
    }
    Ok(total / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn sandwich_bounds() {
        // max ≤ max_ε ≤ ε + max
        let v = max_eps(&[0.0, 0.0], 0.3).unwrap();
        assert!(v >= 0.0 && v <= 0.3, "got {v}");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let t: [f64; 2] = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let eps = rng.gen_range(0.01..1.0);
            let m = t[0].max(t[1]);
            let v = max_eps(&t, eps).unwrap();
            assert!(v >= m - 1e-12 && v <= m + eps + 1e-12);
        }
    }

    #[test]
    fn coordinate_dropping_is_exact() {
        // t_i + 2ε ≤ max(others) ⇒ the i-th argument is invisible
        let eps = 0.25;
        let a = max_eps(&[0.0, -3.0 * eps], eps).unwrap();
        let b = max_eps(&[0.0], eps).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn monotone_in_every_argument() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let t = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let eps = rng.gen_range(0.05..0.5);
            let base = max_eps(&t, eps).unwrap();
            for d in 0..3 {
                let mut up = t;
                up[d] += rng.gen_range(0.0..0.5);
                assert!(max_eps(&up, eps).unwrap() >= base - 1e-12);
            }
        }
    }

    #[test]
    fn midpoint_convexity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let b = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let eps = 0.2;
            let va = max_eps(&a, eps).unwrap();
            let vb = max_eps(&b, eps).unwrap();
            let vm = max_eps(&mid, eps).unwrap();
            assert!(vm <= 0.5 * (va + vb) + 1e-10);
        }
    }

    #[test]
    fn monte_carlo_agrees_with_quadrature() {
        let t = [0.1, -0.2, 0.05];
        let eps = 0.3;
        let q = max_eps(&t, eps).unwrap();
        let mc = max_eps_mc(&t, eps, 200_000, 9).unwrap();
        assert!((q - mc).abs() < 5e-3, "quad {q} vs mc {mc}");
    }
}
