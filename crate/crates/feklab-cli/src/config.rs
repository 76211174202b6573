//! Flat `key = value` experiment configs.
//!
//! The format is deliberately plain: optional `[section]` headers, one
//! `key = value` pair per line, `#` comments, no nesting, no quoting.  The
//! full grammar is documented in the guide's experiments chapter.

use crate::expr::WeightExpr;
use feklab::error::{Error, Result};
use feklab::model::SetShape;
use std::collections::BTreeMap;

/// Parsed `key = value` file with section qualifiers.
#[derive(Clone, Debug, Default)]
pub struct FlatConfig {
    entries: BTreeMap<String, String>,
}

impl FlatConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Format(format!("line {}: bad section header", lineno + 1)))?;
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Format(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = if section.is_empty() {
                k.trim().to_string()
            } else {
                format!("{section}.{}", k.trim())
            };
            entries.insert(key, v.trim().to_string());
        }
        Ok(FlatConfig { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    fn parse_as<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("bad value for '{key}': '{s}'"))),
        }
    }
}

/// Which gauge a weight expression lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    /// Chart weight: sections sized as plain polynomials times `e^{-pφ}`.
    Flat,
    /// Bounded global weight against the reference metric.
    Global,
}

impl Gauge {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(Gauge::Flat),
            "global" => Ok(Gauge::Global),
            other => Err(Error::Config(format!(
                "unknown gauge '{other}' (expected 'flat' or 'global')"
            ))),
        }
    }
}

pub fn parse_set_shape(name: &str) -> Result<SetShape> {
    if let Some(rest) = name.strip_prefix("annulus:") {
        let r: f64 = rest
            .parse()
            .map_err(|_| Error::Config(format!("bad annulus radius '{rest}'")))?;
        return Ok(SetShape::Annulus(r));
    }
    match name {
        "unit-disc" | "disc" => Ok(SetShape::UnitDisc),
        "interval" => Ok(SetShape::Interval),
        "square" => Ok(SetShape::Square),
        "whole-chart" | "x" => Ok(SetShape::WholeChart),
        other => Err(Error::Config(format!("unknown set '{other}'"))),
    }
}

/// A full experiment description.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub name: String,
    pub shape: SetShape,
    pub weight: WeightExpr,
    pub gauge: Gauge,
    pub degrees: Vec<usize>,
    pub chart_half_width: f64,
    pub chart_resolution: usize,
    pub gamma: f64,
    pub envelope_tol: f64,
    pub exchange_tol: f64,
    pub max_sweeps: usize,
    pub restarts: usize,
    pub seed: u64,
    pub dictionary_size: usize,
    pub csv_path: Option<String>,
    pub svg_path: Option<String>,
}

impl ExperimentConfig {
    /// Built-in experiment names used by `rates run --experiment`.
    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "disc-flat" => {
                "[experiment]\nname = disc-flat\nset = unit-disc\nweight = 0\ngauge = flat\n\
                 degrees = 8,12,16,24,32,48,64\n[chart]\nhalf_width = 2\nresolution = 128\n"
            }
            "interval-flat" => {
                "[experiment]\nname = interval-flat\nset = interval\nweight = 0\ngauge = flat\n\
                 degrees = 8,12,16,24,32,48\n[chart]\nhalf_width = 2\nresolution = 128\n"
            }
            "x-positive" => {
                "[experiment]\nname = x-positive\nset = whole-chart\n\
                 weight = 0.45*(1 - 1/(1+r2))\ngauge = global\n\
                 degrees = 8,12,16,24,32,48,64\n[chart]\nhalf_width = 6\nresolution = 192\n"
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown experiment '{other}' (built-ins: disc-flat, interval-flat, x-positive)"
                )))
            }
        };
        Self::from_flat(&FlatConfig::parse(text)?)
    }

    pub fn from_flat(cfg: &FlatConfig) -> Result<Self> {
        let name = cfg.get_or("experiment.name", "custom").to_string();
        let shape = parse_set_shape(cfg.get_or("experiment.set", "unit-disc"))?;
        let weight = WeightExpr::parse(cfg.get_or("experiment.weight", "0"))?;
        let gauge = Gauge::parse(cfg.get_or("experiment.gauge", "flat"))?;
        let degrees: Vec<usize> = cfg
            .get_or("experiment.degrees", "8,12,16,24,32")
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad degree '{s}'")))
            })
            .collect::<Result<_>>()?;
        if degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("degree list must be strictly increasing".into()));
        }
        if degrees.is_empty() || degrees[0] == 0 {
            return Err(Error::Config("degrees must start at p ≥ 1".into()));
        }
        Ok(ExperimentConfig {
            name,
            shape,
            weight,
            gauge,
            degrees,
            chart_half_width: cfg.parse_as("chart.half_width", 2.0)?,
            chart_resolution: cfg.parse_as("chart.resolution", 128)?,
            gamma: cfg.parse_as("metrics.gamma", 2.0)?,
            envelope_tol: cfg.parse_as("solver.envelope_tol", 1e-9)?,
            exchange_tol: cfg.parse_as("solver.exchange_tol", 1e-9)?,
            max_sweeps: cfg.parse_as("solver.max_sweeps", 200)?,
            restarts: cfg.parse_as("solver.restarts", 0)?,
            seed: cfg.parse_as("solver.seed", 0)?,
            dictionary_size: cfg.parse_as("metrics.dictionary_size", 256)?,
            csv_path: cfg.get("output.csv").map(str::to_string),
            svg_path: cfg.get("output.svg").map(str::to_string),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_sections_and_comments() {
        let text = "# top comment\n[experiment]\nname = demo\nset = interval\n\
                    degrees = 2, 4, 8\n[chart]\nhalf_width = 2.5 # inline\n";
        let flat = FlatConfig::parse(text).unwrap();
        assert_eq!(flat.get("experiment.name"), Some("demo"));
        let cfg = ExperimentConfig::from_flat(&flat).unwrap();
        assert_eq!(cfg.shape, SetShape::Interval);
        assert_eq!(cfg.degrees, vec![2, 4, 8]);
        assert_eq!(cfg.chart_half_width, 2.5);
    }

    #[test]
    fn non_increasing_degrees_rejected() {
        let text = "[experiment]\ndegrees = 8,8,16\n";
        let flat = FlatConfig::parse(text).unwrap();
        assert!(ExperimentConfig::from_flat(&flat).is_err());
    }

    #[test]
    fn builtins_parse() {
        for name in ["disc-flat", "interval-flat", "x-positive"] {
            let cfg = ExperimentConfig::builtin(name).unwrap();
            assert!(!cfg.degrees.is_empty());
        }
        assert!(ExperimentConfig::builtin("nope").is_err());
    }
}
