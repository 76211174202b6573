//! Bit-exact CSV serialization.
//!
//! Every file starts with the fixed header line
//! `format_version,chart_R,chart_M` followed by a value line.  Floats are
//! written as hexadecimal float literals (`0x1.9p+3` style) so that a
//! write/read round trip reproduces the original bits.

use super::chart::Chart;
use super::grid::GridFunction;
use super::measure::{DiscreteMeasure, MeasureKind};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{BufRead, Write};

pub const FORMAT_VERSION: u32 = 1;

/// C-style hexadecimal float literal of an `f64`.
pub fn format_hex_f64(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        return "-inf".to_string();
    }
    assert!(!x.is_nan() && x != f64::INFINITY, "unserializable value");
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    if exp == 0 {
        return format!("{sign}0x0.{mant:013x}p-1022");
    }
    format!("{sign}0x1.{mant:013x}p{:+}", exp - 1023)
}

/// Parse the literals produced by [`format_hex_f64`].
pub fn parse_hex_f64(s: &str) -> Result<f64> {
    let bad = || Error::Format(format!("bad hex float literal '{s}'"));
    if s == "-inf" {
        return Ok(f64::NEG_INFINITY);
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x").ok_or_else(bad)?;
    let (mant_str, exp_str) = rest.split_once('p').ok_or_else(bad)?;
    let exp: i64 = exp_str.parse().map_err(|_| bad())?;
    let (int_str, frac_str) = mant_str.split_once('.').unwrap_or((mant_str, ""));
    if frac_str.len() > 13 {
        return Err(bad());
    }
    let int_part: u64 = if int_str.is_empty() {
        return Err(bad());
    } else {
        u64::from_str_radix(int_str, 16).map_err(|_| bad())?
    };
    let frac_part: u64 = if frac_str.is_empty() {
        0
    } else {
        u64::from_str_radix(frac_str, 16).map_err(|_| bad())?
    };
    if int_part > 1 {
        return Err(bad());
    }
    let frac_bits = frac_part << (4 * (13 - frac_str.len() as u32));
    let value = if int_part == 0 && frac_bits == 0 {
        0.0
    } else if int_part == 1 {
        if !(-1022..=1023).contains(&exp) {
            return Err(bad());
        }
        f64::from_bits((((exp + 1023) as u64) << 52) | frac_bits)
    } else {
        // subnormal: 0x0.<frac>p-1022
        if exp != -1022 {
            return Err(bad());
        }
        f64::from_bits(frac_bits)
    };
    Ok(if sign { -value } else { value })
}

fn write_header(w: &mut impl Write, chart: Chart) -> Result<()> {
    writeln!(w, "format_version,chart_R,chart_M")?;
    writeln!(
        w,
        "{},{},{}",
        FORMAT_VERSION,
        format_hex_f64(chart.half_width()),
        chart.resolution()
    )?;
    Ok(())
}

/// Parse the two header lines; returns the chart they declare.
pub fn read_header(lines: &mut impl Iterator<Item = std::io::Result<String>>) -> Result<Chart> {
    let head = lines
        .next()
        .ok_or_else(|| Error::Format("empty file".into()))??;
    if head.trim() != "format_version,chart_R,chart_M" {
        return Err(Error::Format(format!("unexpected header line '{head}'")));
    }
    let vals = lines
        .next()
        .ok_or_else(|| Error::Format("missing header values".into()))??;
    let parts: Vec<&str> = vals.trim().split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Format(format!("bad header values '{vals}'")));
    }
    if parts[0] != FORMAT_VERSION.to_string() {
        return Err(Error::UnsupportedVersion {
            found: parts[0].to_string(),
            expected: FORMAT_VERSION,
        });
    }
    let r = parse_hex_f64(parts[1])?;
    let m: usize = parts[2]
        .parse()
        .map_err(|_| Error::Format(format!("bad resolution '{}'", parts[2])))?;
    Chart::new(r, m)
}

pub fn write_grid_function(w: &mut impl Write, g: &GridFunction) -> Result<()> {
    write_header(w, g.chart())?;
    writeln!(w, "j,k,value")?;
    let n = g.chart().side();
    for j in 0..n {
        for k in 0..n {
            writeln!(w, "{},{},{}", j, k, format_hex_f64(g.get(j, k)))?;
        }
    }
    Ok(())
}

pub fn read_grid_function(r: impl BufRead) -> Result<GridFunction> {
    let mut lines = r.lines();
    let chart = read_header(&mut lines)?;
    match lines.next() {
        Some(Ok(l)) if l.trim() == "j,k,value" => {}
        _ => return Err(Error::Format("missing grid column header".into())),
    }
    let mut values = vec![f64::NAN; chart.node_count()];
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let parts: Vec<&str> = t.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Format(format!("bad grid row '{t}'")));
        }
        let j: usize = parts[0]
            .parse()
            .map_err(|_| Error::Format(format!("bad index '{}'", parts[0])))?;
        let k: usize = parts[1]
            .parse()
            .map_err(|_| Error::Format(format!("bad index '{}'", parts[1])))?;
        if j >= chart.side() || k >= chart.side() {
            return Err(Error::Format(format!("index ({j},{k}) outside grid")));
        }
        values[chart.index(j, k)] = parse_hex_f64(parts[2])?;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Format("grid file does not cover every node".into()));
    }
    GridFunction::from_values(chart, values)
}

pub fn write_measure(w: &mut impl Write, chart: Chart, mu: &DiscreteMeasure) -> Result<()> {
    write_header(w, chart)?;
    let kind = match mu.kind() {
        MeasureKind::PointAtoms => "point-atoms",
        MeasureKind::GridCells => "grid-cells",
    };
    writeln!(w, "kind,{kind}")?;
    writeln!(w, "re,im,mass")?;
    for &(z, m) in mu.atoms() {
        writeln!(
            w,
            "{},{},{}",
            format_hex_f64(z.re),
            format_hex_f64(z.im),
            format_hex_f64(m)
        )?;
    }
    Ok(())
}

pub fn read_measure(r: impl BufRead) -> Result<(Chart, DiscreteMeasure)> {
    let mut lines = r.lines();
    let chart = read_header(&mut lines)?;
    let kind_line = lines
        .next()
        .ok_or_else(|| Error::Format("missing measure kind".into()))??;
    let kind = match kind_line.trim() {
        "kind,point-atoms" => MeasureKind::PointAtoms,
        "kind,grid-cells" => MeasureKind::GridCells,
        other => return Err(Error::Format(format!("bad kind line '{other}'"))),
    };
    match lines.next() {
        Some(Ok(l)) if l.trim() == "re,im,mass" => {}
        _ => return Err(Error::Format("missing measure column header".into())),
    }
    let mut atoms = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let parts: Vec<&str> = t.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Format(format!("bad atom row '{t}'")));
        }
        atoms.push((
            Complex64::new(parse_hex_f64(parts[0])?, parse_hex_f64(parts[1])?),
            parse_hex_f64(parts[2])?,
        ));
    }
    Ok((chart, DiscreteMeasure::new(atoms, kind)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_float_special_values() {
        assert_eq!(format_hex_f64(0.0), "0x0p+0");
        assert_eq!(format_hex_f64(1.0), "0x1.0000000000000p+0");
        assert_eq!(parse_hex_f64("0x1.8p+1").unwrap(), 3.0);
        assert_eq!(
            parse_hex_f64(&format_hex_f64(f64::NEG_INFINITY)).unwrap(),
            f64::NEG_INFINITY
        );
        // subnormal round trip
        let tiny = f64::from_bits(0x0000_0000_0000_0007);
        assert_eq!(parse_hex_f64(&format_hex_f64(tiny)).unwrap(), tiny);
    }

    #[test]
    fn grid_round_trip_is_bit_exact() {
        let chart = Chart::new(2.0, 6).unwrap();
        let g = GridFunction::from_fn(chart, |z| (z.re * 17.3).sin() * (z.im + 0.1).exp());
        let mut buf = Vec::new();
        write_grid_function(&mut buf, &g).unwrap();
        let back = read_grid_function(&buf[..]).unwrap();
        assert_eq!(g.values(), back.values());
    }

    #[test]
    fn foreign_version_is_rejected() {
        let text = "format_version,chart_R,chart_M\n9,0x1p+1,4\nj,k,value\n";
        match read_grid_function(text.as_bytes()) {
            Err(Error::UnsupportedVersion { found, .. }) => assert_eq!(found, "9"),
            other => panic!("expected version error, got {other:?}"),
        }
    }

    #[test]
    fn corrupted_header_is_rejected() {
        let text = "formatversion\n1,0x1p+1,4\n";
        assert!(matches!(
            read_grid_function(text.as_bytes()),
            Err(Error::Format(_))
        ));
    }
}
