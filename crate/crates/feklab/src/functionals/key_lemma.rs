//! Quantitative derivative-comparison inequality for a concave function
//! dominating a differentiable one.

use crate::error::{Error, Result};

/// Outcome of a derivative-comparison check.
#[derive(Clone, Debug)]
pub struct KeyLemmaCheck {
    /// `|F'(0) - G'(0)|` from central differences at the origin.
    pub measured: f64,
    /// `(2 + M)·√ε`.
    pub bound: f64,
}

/// Check the hypotheses numerically on symmetric samples of `F` and `G`
/// over `[-√ε, √ε]` and return the measured derivative gap with its bound:
/// if `F ≥ G - ε` with `|F(0)-G(0)| ≤ ε`, `F` concave, and `G'` has modulus
/// `M` on the interval, then `|F'(0) - G'(0)| ≤ (2+M)√ε`.
///
/// Samples must be equally spaced with an odd count (so the midpoint is
/// the origin).  Hypothesis violations are configuration errors — the
/// caller generates candidates and filters.
pub fn key_lemma_margin(
    f_samples: &[f64],
    g_samples: &[f64],
    eps: f64,
    m_const: f64,
) -> Result<KeyLemmaCheck> {
    let n = f_samples.len();
    if n < 5 || n % 2 == 0 || g_samples.len() != n {
        return Err(Error::Config(
            "need an odd number (≥5) of equally spaced samples for both functions".into(),
        ));
    }
    if !(eps > 0.0) || !(m_const >= 0.0) {
        return Err(Error::Config("need ε > 0 and M ≥ 0".into()));
    }
    let root_eps = eps.sqrt();
    let h = 2.0 * root_eps / (n - 1) as f64;
    let mid = n / 2;
    // hypothesis a): domination and closeness at the origin
    for i in 0..n {
        if f_samples[i] < g_samples[i] - eps - 1e-12 {
            return Err(Error::Config(format!(
                "F ≥ G - ε fails at sample {i}: {} < {} - {eps}",
                f_samples[i], g_samples[i]
            )));
        }
    }
    if (f_samples[mid] - g_samples[mid]).abs() > eps + 1e-12 {
        return Err(Error::Config("|F(0) - G(0)| ≤ ε fails".into()));
    }
    // hypothesis b): concavity of F by second differences
    for i in 1..n - 1 {
        let second = f_samples[i - 1] - 2.0 * f_samples[i] + f_samples[i + 1];
        if second > 1e-10 * f_samples[i].abs().max(1.0) {
            return Err(Error::Config(format!(
                "F is not concave: second difference {second:e} at sample {i}"
            )));
        }
    }
    // hypothesis c): modulus of G' against G'(0)
    let g_prime = |i: usize| (g_samples[i + 1] - g_samples[i - 1]) / (2.0 * h);
    let g0 = g_prime(mid);
    for i in 1..n - 1 {
        if (g_prime(i) - g0).abs() > m_const * root_eps + 1e-9 {
            return Err(Error::Config(format!(
                "G' modulus exceeds M·√ε at sample {i}"
            )));
        }
    }
    let f0 = (f_samples[mid + 1] - f_samples[mid - 1]) / (2.0 * h);
    Ok(KeyLemmaCheck {
        measured: (f0 - g0).abs(),
        bound: (2.0 + m_const) * root_eps,
    })
}
