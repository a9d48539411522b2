//! Text and binary output formats.
//!
//! Floats are written with 17 significant digits in scientific notation, so
//! identical inputs give byte-identical files and every value re-parses exactly.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::BesselZeroTable;
use crate::quantize::{QuantumNumbers, SpectrumEntry};
use crate::skeleton::OrbitTrace;
use crate::wavefield::{FieldGrid, GridSpec, ScarProfile};

/// Locale-independent float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn quantum_header(q: &QuantumNumbers) -> &'static str {
    match q {
        QuantumNumbers::Circle { .. } => "m,r",
        QuantumNumbers::Broken { .. } => "n0,m0,n,m",
        QuantumNumbers::Pair { .. } => "n,m",
    }
}

fn quantum_fields(q: &QuantumNumbers) -> String {
    match *q {
        QuantumNumbers::Circle { m, r } => format!("{m},{r}"),
        QuantumNumbers::Broken { n0, m0, n, m } => format!("{n0},{m0},{n},{m}"),
        QuantumNumbers::Pair { n, m } => format!("{n},{m}"),
    }
}

/// Spectrum table with columns `<quantum numbers>, alpha, E0, E1, E, degenerate`.
pub fn spectrum_csv(entries: &[SpectrumEntry]) -> Result<String> {
    let header = entries
        .first()
        .map(|e| quantum_header(&e.quantum))
        .unwrap_or("n,m");
    if entries.iter().any(|e| quantum_header(&e.quantum) != header) {
        return Err(Error::InvalidInput(
            "spectrum mixes quantum-number layouts".into(),
        ));
    }
    let mut out = format!("{header},alpha,E0,E1,E,degenerate\n");
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            quantum_fields(&e.quantum),
            fmt_f64(e.alpha),
            fmt_f64(e.e0),
            fmt_f64(e.e1),
            fmt_f64(e.energy()),
            e.degenerate
        ));
    }
    Ok(out)
}

/// Spectrum as a JSON array.
pub fn spectrum_json(entries: &[SpectrumEntry]) -> Result<String> {
    Ok(serde_json::to_string_pretty(entries)? + "\n")
}

/// Parses the output of [`spectrum_json`].
pub fn parse_spectrum_json(text: &str) -> Result<Vec<SpectrumEntry>> {
    Ok(serde_json::from_str(text)?)
}

/// Field table with columns `x, y, re, im, inside, allowed`.
pub fn field_csv(grid: &FieldGrid) -> String {
    let mut out = String::from("x,y,re,im,inside,allowed\n");
    for j in 0..grid.spec.ny {
        for i in 0..grid.spec.nx {
            let (x, y) = grid.spec.node(i, j);
            let k = grid.index(i, j);
            let v = grid.values[k];
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(v.re),
                fmt_f64(v.im),
                u8::from(grid.inside[k]),
                u8::from(grid.allowed[k])
            ));
        }
    }
    out
}

/// Little-endian binary field: `nx, ny, xmin, ymin, xmax, ymax` as f64, then
/// `(re, im)` pairs row by row with `x` varying fastest.
pub fn write_field_binary(grid: &FieldGrid, out: &mut impl Write) -> Result<()> {
    let s = &grid.spec;
    for h in [
        s.nx as f64,
        s.ny as f64,
        s.bbox[0],
        s.bbox[1],
        s.bbox[2],
        s.bbox[3],
    ] {
        out.write_all(&h.to_le_bytes())?;
    }
    for v in &grid.values {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a binary field back as its grid and values.
pub fn read_field_binary(input: &mut impl Read) -> Result<(GridSpec, Vec<Complex64>)> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let floats: Vec<f64> = bytes
        .chunks(8)
        .map(|c| c.try_into().map(f64::from_le_bytes))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Format("length is not a multiple of 8 bytes".into()))?;
    if floats.len() < 6 {
        return Err(Error::Format("header is truncated".into()));
    }
    let (nx, ny) = (floats[0], floats[1]);
    if !(nx.fract() == 0.0
        && ny.fract() == 0.0
        && (0.0..=u32::MAX as f64).contains(&nx)
        && (0.0..=u32::MAX as f64).contains(&ny))
    {
        return Err(Error::Format("grid size is not a whole number".into()));
    }
    let body = &floats[6..];
    let count = (nx as u64) * (ny as u64);
    if body.len() as u64 != 2 * count {
        return Err(Error::Format(format!(
            "expected {count} values, found {}",
            body.len() / 2
        )));
    }
    let spec = GridSpec::new(
        nx as usize,
        ny as usize,
        [floats[2], floats[3], floats[4], floats[5]],
    );
    Ok((
        spec,
        body.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect(),
    ))
}

/// Scar table with columns `x, re, im, abs`.
pub fn scar_csv(profile: &ScarProfile) -> String {
    let mut out = String::from("x,re,im,abs\n");
    for (x, v) in profile.xs.iter().zip(&profile.values) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(*x),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(v.norm())
        ));
    }
    out
}

/// One JSON object per flight of the trace.
pub fn trace_json_lines(trace: &OrbitTrace) -> Result<String> {
    let mut out = String::new();
    for hit in &trace.hits {
        out.push_str(&serde_json::to_string(hit)?);
        out.push('\n');
    }
    Ok(out)
}

/// Zero table with columns `m, r, zero`.
pub fn bessel_table_csv(table: &BesselZeroTable) -> String {
    let mut out = String::from("m,r,zero\n");
    for (r, z) in table.zeros.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", table.m, r + 1, fmt_f64(*z)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::circle_spectrum;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn csv_header_follows_family() {
        let s = circle_spectrum(1.0, 1, 1, 1).unwrap();
        let csv = spectrum_csv(&s).unwrap();
        assert!(csv.starts_with("m,r,alpha,E0,E1,E,degenerate\n0,1,"));
    }

    #[test]
    fn truncated_binary_is_rejected() {
        let mut bytes: &[u8] = &[0u8; 20];
        assert!(matches!(
            read_field_binary(&mut bytes),
            Err(Error::Format(_))
        ));
    }
}
