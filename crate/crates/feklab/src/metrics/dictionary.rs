//! Certified test-function dictionaries for dual distances.
//!
//! `dist_γ(μ, ν) = sup { |⟨μ-ν, v⟩| : ‖v‖_{C^γ} ≤ 1 }` is not computable
//! exactly; a dictionary of closed-form functions with *analytically
//! certified* norm bounds gives a certified lower bound.  The certificates
//! are deliberately monotone nondecreasing in `γ`, so dictionaries at two
//! smoothness levels are nested by rescaling and the estimates satisfy
//! `est_{γ'} ≤ est_γ` for `γ ≤ γ'` by construction.
//!
//! Norm convention: for `0 < γ ≤ 1`, sup-norm plus γ-Hölder seminorm; for
//! `1 < γ ≤ 2`, `‖v‖_∞ + ‖v'‖_∞` plus the (γ-1)-Hölder seminorm of `v'`.

use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAUSS_D1: f64 = 0.60653065971263342; // sup|g'|·s for a unit Gaussian bump

#[derive(Clone, Copy, Debug)]
enum TestFnKind {
    /// `cos(2πk·x/period)` on the carrier coordinate.
    Cos { k: usize, period: f64 },
    Sin { k: usize, period: f64 },
    /// `exp(-(x-c)²/(2s²))`.
    Gauss { center: f64, width: f64 },
}

impl TestFnKind {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            TestFnKind::Cos { k, period } => {
                (2.0 * std::f64::consts::PI * k as f64 * x / period).cos()
            }
            TestFnKind::Sin { k, period } => {
                (2.0 * std::f64::consts::PI * k as f64 * x / period).sin()
            }
            TestFnKind::Gauss { center, width } => {
                let u = (x - center) / width;
                (-0.5 * u * u).exp()
            }
        }
    }

    /// Analytic bound for `sup|v'|`.
    fn d1_bound(&self) -> f64 {
        match *self {
            TestFnKind::Cos { k, period } | TestFnKind::Sin { k, period } => {
                2.0 * std::f64::consts::PI * k as f64 / period
            }
            TestFnKind::Gauss { width, .. } => GAUSS_D1 / width,
        }
    }

    /// Analytic bound for `sup|v''|`.
    fn d2_bound(&self) -> f64 {
        match *self {
            TestFnKind::Cos { k, period } | TestFnKind::Sin { k, period } => {
                (2.0 * std::f64::consts::PI * k as f64 / period).powi(2)
            }
            TestFnKind::Gauss { width, .. } => 1.0 / (width * width),
        }
    }

    /// Certified `C^γ` norm bound, monotone nondecreasing in `γ`.
    ///
    /// Uses `Höl_α(f) ≤ 2^{1-α}·‖f‖_∞^{1-α}·‖f'‖_∞^α ≤ 2·max(‖f'‖_∞,1)^α`
    /// (for `‖f‖_∞ ≤ 1`), and the analogous bound on `v'` above γ = 1.
    fn certified_norm(&self, gamma: f64) -> f64 {
        let b1 = self.d1_bound().max(1.0);
        let b2 = self.d2_bound().max(b1);
        if gamma <= 1.0 {
            1.0 + 2.0 * b1.powf(gamma)
        } else {
            1.0 + self.d1_bound() + 2.0 * b1.powf(2.0 - gamma) * b2.powf(gamma - 1.0)
        }
    }
}

/// A family of test functions on a 1-D carrier coordinate, each scaled to
/// certified `C^γ` norm ≤ 1.
#[derive(Clone, Debug)]
pub struct TestDictionary {
    gamma: f64,
    members: Vec<(TestFnKind, f64)>, // (function, 1/certified norm)
}

impl TestDictionary {
    /// Trigonometric family on a periodic carrier (circles).
    pub fn trig(gamma: f64, period: f64, max_k: usize) -> Result<Self> {
        Self::check_gamma(gamma)?;
        let mut members = Vec::with_capacity(2 * max_k + 1);
        members.push((TestFnKind::Cos { k: 0, period }, 1.0 / 2.0)); // the constant
        for k in 1..=max_k {
            for f in [TestFnKind::Cos { k, period }, TestFnKind::Sin { k, period }] {
                members.push((f, 1.0 / f.certified_norm(gamma)));
            }
        }
        Ok(TestDictionary { gamma, members })
    }

    /// Trigonometric functions (over an interval pullback of length
    /// `2·span`) plus Gaussian bumps at seeded centers and scales.
    pub fn trig_and_bumps(
        gamma: f64,
        lo: f64,
        hi: f64,
        count: usize,
        seed: u64,
    ) -> Result<Self> {
        Self::check_gamma(gamma)?;
        let period = 2.0 * (hi - lo);
        let mut members = Vec::with_capacity(count);
        let trig_count = count / 2;
        members.push((TestFnKind::Cos { k: 0, period }, 0.5));
        for k in 1..=(trig_count / 2).max(1) {
            for f in [TestFnKind::Cos { k, period }, TestFnKind::Sin { k, period }] {
                members.push((f, 1.0 / f.certified_norm(gamma)));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while members.len() < count {
            let center = rng.gen_range(lo..hi);
            let width = rng.gen_range(0.05..0.6);
            let f = TestFnKind::Gauss { center, width };
            members.push((f, 1.0 / f.certified_norm(gamma)));
        }
        Ok(TestDictionary { gamma, members })
    }

    fn check_gamma(gamma: f64) -> Result<()> {
        if !(0.0 < gamma && gamma <= 2.0) {
            return Err(Error::Config(format!(
                "dictionary smoothness γ must lie in (0, 2], got {gamma}"
            )));
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The same member functions re-certified at another smoothness level.
    pub fn rescaled(&self, gamma: f64) -> Result<Self> {
        Self::check_gamma(gamma)?;
        Ok(TestDictionary {
            gamma,
            members: self
                .members
                .iter()
                .map(|&(f, _)| (f, 1.0 / f.certified_norm(gamma)))
                .collect(),
        })
    }

    /// Certified Lipschitz constant of the scaled dictionary.
    pub fn max_lipschitz(&self) -> f64 {
        self.members
            .iter()
            .map(|&(f, inv)| f.d1_bound() * inv)
            .fold(0.0, f64::max)
    }

    /// `max over members |Σ_atoms mass·v(x)|` for a signed pairing of two
    /// atom lists in carrier coordinates.
    pub fn pairing_sup(&self, mu: &[(f64, f64)], nu: &[(f64, f64)]) -> f64 {
        self.members
            .iter()
            .map(|&(f, inv)| {
                let a: f64 = mu.iter().map(|&(x, m)| m * f.eval(x)).sum();
                let b: f64 = nu.iter().map(|&(x, m)| m * f.eval(x)).sum();
                ((a - b) * inv).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Certified lower bound for `dist_γ` between two measures given in
/// carrier coordinates.
pub fn dist_gamma_lower(
    mu: &[(f64, f64)],
    nu: &[(f64, f64)],
    dict: &TestDictionary,
) -> f64 {
    dict.pairing_sup(mu, nu)
}

/// Nested-dictionary interpolation check: returns the `γ'`-estimate, the
/// `γ`-estimate and a `w1`-based upper surrogate; the first never exceeds
/// the second by construction.
pub fn interpolation_check(
    mu: &[(f64, f64)],
    nu: &[(f64, f64)],
    dict: &TestDictionary,
    gamma_prime: f64,
) -> Result<(f64, f64, f64)> {
    if gamma_prime < dict.gamma() {
        return Err(Error::Config("need γ' ≥ γ".into()));
    }
    let fine = dict.rescaled(gamma_prime)?;
    let est_prime = fine.pairing_sup(mu, nu);
    let est = dict.pairing_sup(mu, nu);
    let w1 = super::wasserstein::w1_line(mu, nu);
    Ok((est_prime, est, w1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_measures_give_zero() {
        let mu = vec![(0.3, 0.5), (-0.2, 0.5)];
        let dict = TestDictionary::trig_and_bumps(1.0, -1.0, 1.0, 32, 7).unwrap();
        assert_eq!(dist_gamma_lower(&mu, &mu, &dict), 0.0);
    }

    #[test]
    fn constant_member_sees_no_probability_pair() {
        let mu = vec![(0.0, 1.0)];
        let nu = vec![(0.9, 1.0)];
        // dictionary of just the constant: k=0 cosine
        let dict = TestDictionary::trig(1.5, 2.0, 0).unwrap();
        assert_eq!(dist_gamma_lower(&mu, &nu, &dict), 0.0);
    }

    #[test]
    fn certificates_are_monotone_in_gamma() {
        let dict = TestDictionary::trig_and_bumps(0.5, -1.0, 1.0, 64, 3).unwrap();
        for &(f, _) in &dict.members {
            let mut prev = 0.0;
            for g in [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0] {
                let c = f.certified_norm(g);
                assert!(c >= prev, "certificate decreased at γ={g}: {c} < {prev}");
                prev = c;
            }
        }
    }

    #[test]
    fn nested_estimates_are_ordered() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dict = TestDictionary::trig_and_bumps(0.75, -1.0, 1.0, 64, 3).unwrap();
        for _ in 0..100 {
            let mu: Vec<(f64, f64)> = (0..6)
                .map(|_| (rng.gen_range(-1.0..1.0), 1.0 / 6.0))
                .collect();
            let nu: Vec<(f64, f64)> = (0..9)
                .map(|_| (rng.gen_range(-1.0..1.0), 1.0 / 9.0))
                .collect();
            let (hi, lo, _w1) = interpolation_check(&mu, &nu, &dict, 1.75).unwrap();
            assert!(hi <= lo + 1e-15, "γ' estimate {hi} exceeds γ estimate {lo}");
        }
    }

    #[test]
    fn hoelder_certificate_is_an_upper_bound() {
        // sampled Hölder quotient of the scaled function never exceeds 1
        let dict = TestDictionary::trig_and_bumps(0.6, -1.0, 1.0, 48, 5).unwrap();
        let g = dict.gamma();
        for &(f, inv) in &dict.members {
            for i in 0..40 {
                let x = -1.0 + 2.0 * (i as f64 + 0.3) / 40.0;
                let y = x + 0.013 * (i as f64 + 1.0);
                let quot = ((f.eval(x) - f.eval(y)) * inv).abs() / (x - y).abs().powf(g);
                let sup = (f.eval(x) * inv).abs();
                assert!(quot + sup <= 1.0 + 1e-12, "norm bound violated: {}", quot + sup);
            }
        }
    }
}
