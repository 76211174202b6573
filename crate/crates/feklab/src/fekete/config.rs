//! Fekete configurations and their on-disk cache format.

use crate::error::{Error, Result};
use crate::model::io::{format_hex_f64, parse_hex_f64, read_header, FORMAT_VERSION};
use crate::model::{Chart, DiscreteMeasure};
use crate::polyspace::{log_vandermonde, SectionBasis, WeightedNormContext};
use num_complex::Complex64;
use std::io::{BufRead, Write};

/// An ordered tuple of `N_p` points with its log weighted-Vandermonde value.
#[derive(Clone, Debug)]
pub struct Configuration {
    points: Vec<Complex64>,
    log_w: f64,
    degree: usize,
    defect: Option<f64>,
}

impl Configuration {
    pub fn new(points: Vec<Complex64>, log_w: f64, degree: usize) -> Self {
        Configuration {
            points,
            log_w,
            degree,
            defect: None,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn log_w(&self) -> f64 {
        self.log_w
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn defect(&self) -> Option<f64> {
        self.defect
    }

    pub fn set_defect(&mut self, sigma: f64) {
        self.defect = Some(sigma);
    }

    /// Recompute the log-Vandermonde value; the stored one must agree to
    /// 1e-10.
    pub fn verify(&self, basis: &SectionBasis, ctx: &WeightedNormContext) -> Result<()> {
        let lw = log_vandermonde(basis, &self.points, ctx)?;
        if (lw - self.log_w).abs() > 1e-10 * self.log_w.abs().max(1.0) {
            return Err(Error::Consistency(format!(
                "stored log_w {} disagrees with recomputed {lw}",
                self.log_w
            )));
        }
        Ok(())
    }

    /// The uniform probability measure on the configuration's points.
    pub fn fekete_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::uniform_on(&self.points)
    }
}

/// Normalized optimality defect `σ_P = (best - log_w)/(p·N_p) ≥ 0`.
///
/// When the caller's "best known" value is in fact worse than the
/// configuration's own, the roles are swapped (with the returned flag set)
/// so the defect stays nonnegative.
pub fn defect(config: &Configuration, best_known_log_w: f64, degree: usize) -> (f64, bool) {
    let n_p = (degree + 1) as f64;
    let scale = degree as f64 * n_p;
    let gap = best_known_log_w - config.log_w;
    if gap >= 0.0 {
        (gap / scale, false)
    } else {
        (-gap / scale, true)
    }
}

/// Write a configuration cache: one row per point (hex Re, Im), trailing
/// metadata rows.
pub fn write_configuration(
    w: &mut impl Write,
    chart: Chart,
    config: &Configuration,
    seed: u64,
    tol: f64,
) -> Result<()> {
    writeln!(w, "format_version,chart_R,chart_M")?;
    writeln!(
        w,
        "{},{},{}",
        FORMAT_VERSION,
        format_hex_f64(chart.half_width()),
        chart.resolution()
    )?;
    writeln!(w, "re,im")?;
    for &z in config.points() {
        writeln!(w, "{},{}", format_hex_f64(z.re), format_hex_f64(z.im))?;
    }
    writeln!(w, "meta,degree,{}", config.degree())?;
    writeln!(w, "meta,log_w,{}", format_hex_f64(config.log_w()))?;
    writeln!(w, "meta,seed,{seed}")?;
    writeln!(w, "meta,tol,{}", format_hex_f64(tol))?;
    if let Some(s) = config.defect() {
        writeln!(w, "meta,defect,{}", format_hex_f64(s))?;
    }
    Ok(())
}

/// Read back a configuration cache (bit-exact inverse of
/// [`write_configuration`]).
pub fn read_configuration(r: impl BufRead) -> Result<(Chart, Configuration, u64, f64)> {
    let mut lines = r.lines();
    let chart = read_header(&mut lines)?;
    match lines.next() {
        Some(Ok(l)) if l.trim() == "re,im" => {}
        _ => return Err(Error::Format("missing point column header".into())),
    }
    let mut points = Vec::new();
    let mut degree = None;
    let mut log_w = None;
    let mut seed = 0u64;
    let mut tol = 0.0f64;
    let mut defect_val = None;
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let parts: Vec<&str> = t.split(',').collect();
        if parts[0] == "meta" {
            if parts.len() != 3 {
                return Err(Error::Format(format!("bad meta row '{t}'")));
            }
            match parts[1] {
                "degree" => {
                    degree = Some(parts[2].parse::<usize>().map_err(|_| {
                        Error::Format(format!("bad degree '{}'", parts[2]))
                    })?)
                }
                "log_w" => log_w = Some(parse_hex_f64(parts[2])?),
                "seed" => {
                    seed = parts[2]
                        .parse()
                        .map_err(|_| Error::Format(format!("bad seed '{}'", parts[2])))?
                }
                "tol" => tol = parse_hex_f64(parts[2])?,
                "defect" => defect_val = Some(parse_hex_f64(parts[2])?),
                other => return Err(Error::Format(format!("unknown meta key '{other}'"))),
            }
        } else {
            if parts.len() != 2 {
                return Err(Error::Format(format!("bad point row '{t}'")));
            }
            points.push(Complex64::new(
                parse_hex_f64(parts[0])?,
                parse_hex_f64(parts[1])?,
            ));
        }
    }
    let degree = degree.ok_or_else(|| Error::Format("missing degree metadata".into()))?;
    let log_w = log_w.ok_or_else(|| Error::Format("missing log_w metadata".into()))?;
    let mut config = Configuration::new(points, log_w, degree);
    if let Some(d) = defect_val {
        config.set_defect(d);
    }
    Ok((chart, config, seed, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_is_bit_exact() {
        let chart = Chart::new(2.0, 16).unwrap();
        let pts = vec![
            Complex64::new(0.1234567890123, -0.9),
            Complex64::new(1.0 / 3.0, 2.0f64.sqrt()),
        ];
        let config = Configuration::new(pts, -1.234567890123456e-3, 1);
        let mut buf = Vec::new();
        write_configuration(&mut buf, chart, &config, 42, 1e-9).unwrap();
        let (chart2, back, seed, tol) = read_configuration(&buf[..]).unwrap();
        assert_eq!(chart, chart2);
        assert_eq!(seed, 42);
        assert_eq!(tol, 1e-9);
        assert_eq!(back.log_w().to_bits(), config.log_w().to_bits());
        for (a, b) in config.points().iter().zip(back.points()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        // a second write of the read-back value is byte-identical
        let mut buf2 = Vec::new();
        write_configuration(&mut buf2, chart2, &back, seed, tol).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn defect_is_nonnegative_and_swaps() {
        let config = Configuration::new(vec![Complex64::new(0.0, 0.0); 4], 2.0, 3);
        let (d, swapped) = defect(&config, 2.6, 3);
        assert!((d - 0.6 / 12.0).abs() < 1e-15 && !swapped);
        let (d2, swapped2) = defect(&config, 1.4, 3);
        assert!(d2 > 0.0 && swapped2);
    }

    #[test]
    fn fekete_measure_is_uniform() {
        let pts = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ];
        let config = Configuration::new(pts.clone(), 16f64.ln(), 3);
        let mu = config.fekete_measure();
        assert!(mu.is_probability(1e-15));
        assert!(mu.atoms().iter().all(|&(_, m)| m == 0.25));
        // permuting the points leaves the measure (as a multiset) unchanged
        let mut perm = pts;
        perm.reverse();
        let mu2 = Configuration::new(perm, 16f64.ln(), 3).fekete_measure();
        let mut a: Vec<_> = mu.atoms().iter().map(|&(z, _)| (z.re, z.im)).collect();
        let mut b: Vec<_> = mu2.atoms().iter().map(|&(z, _)| (z.re, z.im)).collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(a, b);
    }
}
