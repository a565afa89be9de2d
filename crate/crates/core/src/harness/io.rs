//! CSV and JSON formats for operators, vectors, measured data and coherence
//! structures.
//!
//! Matrices: header `row,col,re,im`, one line per entry, every entry present
//! once. Vectors: `index,re,im`. Measured data: `index,magnitude,phase_diff`.
//! Indices are zero-based; lines may come in any order. Floats are written in
//! shortest round-trip form, so write-then-read is exact.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::coherence::{CoherenceStructure, MagnitudePhaseData};
use crate::error::{Error, Result};
use crate::{CMatrix, CVector, PhaseData};

/// Largest accepted index range, to reject absurd allocations.
const MAX_ENTRIES: usize = 1 << 28;

fn parse_error(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

/// Parsed numeric records with their source line numbers.
fn read_records(file: &str, reader: impl Read, header: &[&str]) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let got: Vec<String> = rdr
        .headers()
        .map_err(|e| parse_error(file, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if got != header {
        return Err(parse_error(file, 1, format!("expected header '{}', found '{}'", header.join(","), got.join(","))));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(file, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(parse_error(file, line, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        let mut vals = Vec::with_capacity(header.len());
        for (field, name) in rec.iter().zip(header) {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_error(file, line, format!("field '{name}': cannot parse '{field}'")))?;
            if !v.is_finite() {
                return Err(parse_error(file, line, format!("field '{name}' is not finite")));
            }
            vals.push(v);
        }
        out.push((line, vals));
    }
    Ok(out)
}

fn index(file: &str, line: usize, name: &str, v: f64) -> Result<usize> {
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(parse_error(file, line, format!("field '{name}': '{v}' is not a valid index")));
    }
    Ok(v as usize)
}

/// Places indexed values, requiring indices `0..len` each exactly once.
fn dense<T: Clone>(file: &str, entries: Vec<(usize, usize, T)>, len: usize) -> Result<Vec<T>> {
    let mut out = vec![None; len];
    for (line, idx, v) in entries {
        if out[idx].is_some() {
            return Err(parse_error(file, line, format!("duplicate entry for index {idx}")));
        }
        out[idx] = Some(v);
    }
    if let Some(missing) = out.iter().position(Option::is_none) {
        return Err(parse_error(file, 0, format!("missing entry for index {missing}")));
    }
    Ok(out.into_iter().flatten().collect())
}

pub fn parse_matrix(file: &str, reader: impl Read) -> Result<CMatrix> {
    let recs = read_records(file, reader, &["row", "col", "re", "im"])?;
    if recs.is_empty() {
        return Err(parse_error(file, 1, "no entries"));
    }
    let mut cells = Vec::with_capacity(recs.len());
    let (mut rows, mut cols) = (0, 0);
    for (line, v) in recs {
        let r = index(file, line, "row", v[0])?;
        let c = index(file, line, "col", v[1])?;
        rows = rows.max(r + 1);
        cols = cols.max(c + 1);
        cells.push((line, r, c, Complex64::new(v[2], v[3])));
    }
    if rows.checked_mul(cols).is_none_or(|len| len > MAX_ENTRIES) {
        return Err(parse_error(file, 0, format!("implausible dimensions {rows}x{cols}")));
    }
    let entries = cells.into_iter().map(|(line, r, c, z)| (line, r * cols + c, z)).collect();
    let data = dense(file, entries, rows * cols)?;
    CMatrix::new(rows, cols, data)
}

pub fn parse_vector(file: &str, reader: impl Read) -> Result<CVector> {
    let recs = read_records(file, reader, &["index", "re", "im"])?;
    let mut entries = Vec::with_capacity(recs.len());
    let mut len = 0;
    for (line, v) in recs {
        let i = index(file, line, "index", v[0])?;
        if i >= MAX_ENTRIES {
            return Err(parse_error(file, line, format!("index {i} too large")));
        }
        len = len.max(i + 1);
        entries.push((line, i, Complex64::new(v[1], v[2])));
    }
    CVector::new(dense(file, entries, len)?)
}

/// Reads magnitudes and phase differences; returns them as two columns.
pub fn parse_magnitudes(file: &str, reader: impl Read) -> Result<(Vec<f64>, Vec<f64>)> {
    let recs = read_records(file, reader, &["index", "magnitude", "phase_diff"])?;
    let mut entries = Vec::with_capacity(recs.len());
    let mut len = 0;
    for (line, v) in recs {
        let i = index(file, line, "index", v[0])?;
        if i >= MAX_ENTRIES {
            return Err(parse_error(file, line, format!("index {i} too large")));
        }
        if v[1] < 0.0 {
            return Err(parse_error(file, line, "field 'magnitude' is negative"));
        }
        len = len.max(i + 1);
        entries.push((line, i, (v[1], v[2])));
    }
    let pairs = dense(file, entries, len)?;
    Ok(pairs.into_iter().unzip())
}

pub fn parse_coherence(file: &str, text: &str, m: usize) -> Result<CoherenceStructure> {
    let groups: Vec<Vec<usize>> = serde_json::from_str(text)
        .map_err(|e| parse_error(file, e.line(), e.to_string()))?;
    CoherenceStructure::new(groups, m)
}

fn open(path: &Path) -> Result<(String, File)> {
    let name = path.display().to_string();
    let f = File::open(path).map_err(|e| parse_error(&name, 0, e.to_string()))?;
    Ok((name, f))
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let (name, f) = open(path)?;
    parse_matrix(&name, f)
}

pub fn read_vector(path: &Path) -> Result<CVector> {
    let (name, f) = open(path)?;
    parse_vector(&name, f)
}

pub fn read_magnitudes(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let (name, f) = open(path)?;
    parse_magnitudes(&name, f)
}

/// Reads a coherence structure over `m` measurements.
pub fn read_coherence(path: &Path, m: usize) -> Result<CoherenceStructure> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| parse_error(&name, 0, e.to_string()))?;
    parse_coherence(&name, &text, m)
}

/// Reads magnitudes and phase differences and validates them against the
/// structure.
pub fn read_phase_data(path: &Path, structure: &CoherenceStructure) -> Result<PhaseData> {
    let (mags, phases) = read_magnitudes(path)?;
    MagnitudePhaseData::new(structure, mags, phases)
}

pub fn write_matrix(w: impl Write, a: &CMatrix) -> Result<()> {
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "row,col,re,im")?;
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let z = a[(r, c)];
            writeln!(w, "{r},{c},{},{}", z.re, z.im)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_vector(w: impl Write, v: &CVector) -> Result<()> {
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "index,re,im")?;
    for (i, z) in v.iter().enumerate() {
        writeln!(w, "{i},{},{}", z.re, z.im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_phase_data(w: impl Write, data: &PhaseData) -> Result<()> {
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "index,magnitude,phase_diff")?;
    for (i, (m, p)) in data.magnitudes().iter().zip(data.phase_diffs()).enumerate() {
        writeln!(w, "{i},{m},{p}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_coherence(w: impl Write, structure: &CoherenceStructure) -> Result<()> {
    serde_json::to_writer(w, structure.groups()).map_err(|e| Error::Io(e.into()))
}
