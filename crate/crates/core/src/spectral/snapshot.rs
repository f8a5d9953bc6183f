//! Field snapshots on disk.
//!
//! Both formats store one row `(ξ₁, ξ₂, ξ₃, component, Re, Im)` per nonzero coefficient.
//!
//! Text: a header line `# gevrey-ns snapshot N=<n> ncomp=<c>` followed by whitespace-separated
//! rows. Reals are printed in shortest round-trip form, so text files also reload exactly.
//!
//! Binary (little endian): magic `GNSF`, `u32` version (1), `u32` N, `u32` ncomp, `u64` row
//! count, then rows of `3 × i64`, `u32`, `2 × f64`.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::{SpectralField, SpectralVectorField};
use super::grid::FrequencyGrid;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"GNSF";
const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnapshotFormat {
    Text,
    Binary,
}

fn rows(fields: &[&SpectralField]) -> Vec<([i64; 3], u32, Complex64)> {
    let mut out = Vec::new();
    for (c, f) in fields.iter().enumerate() {
        for idx in f.support() {
            out.push((f.grid().wavevector(idx), c as u32, f.coeffs()[idx]));
        }
    }
    out
}

/// Writes the components of one field, all on the same grid.
pub fn write_snapshot(path: &Path, fields: &[&SpectralField], format: SnapshotFormat) -> Result<()> {
    let grid = fields
        .first()
        .ok_or_else(|| Error::Snapshot("no components to write".into()))?
        .grid();
    for f in fields {
        grid.ensure_same(&f.grid())?;
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    let rows = rows(fields);
    match format {
        SnapshotFormat::Text => {
            writeln!(w, "# gevrey-ns snapshot N={} ncomp={}", grid.n(), fields.len())?;
            for (k, c, v) in rows {
                writeln!(w, "{} {} {} {} {:?} {:?}", k[0], k[1], k[2], c, v.re, v.im)?;
            }
        }
        SnapshotFormat::Binary => {
            w.write_all(MAGIC)?;
            w.write_all(&VERSION.to_le_bytes())?;
            w.write_all(&(grid.n() as u32).to_le_bytes())?;
            w.write_all(&(fields.len() as u32).to_le_bytes())?;
            w.write_all(&(rows.len() as u64).to_le_bytes())?;
            for (k, c, v) in rows {
                for kk in k {
                    w.write_all(&kk.to_le_bytes())?;
                }
                w.write_all(&c.to_le_bytes())?;
                w.write_all(&v.re.to_le_bytes())?;
                w.write_all(&v.im.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a snapshot in either format, detected from the leading bytes.
pub fn read_snapshot(path: &Path) -> Result<Vec<SpectralField>> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        read_binary(&bytes)
    } else {
        read_text(&bytes)
    }
}

fn assemble(n: usize, ncomp: usize, rows: Vec<([i64; 3], usize, Complex64)>) -> Result<Vec<SpectralField>> {
    let grid = FrequencyGrid::new(n)?;
    if ncomp == 0 {
        return Err(Error::Snapshot("snapshot declares zero components".into()));
    }
    let mut out = vec![SpectralField::zeros(grid); ncomp];
    for (k, c, v) in rows {
        if c >= ncomp {
            return Err(Error::Snapshot(format!("component {c} out of range")));
        }
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Snapshot(format!("non-finite coefficient at {k:?}")));
        }
        out[c]
            .set(k, v)
            .map_err(|_| Error::Snapshot(format!("wavevector {k:?} outside the N={n} lattice")))?;
    }
    Ok(out)
}

fn take<const L: usize>(bytes: &[u8], pos: &mut usize) -> Result<[u8; L]> {
    let end = *pos + L;
    let slice = bytes
        .get(*pos..end)
        .ok_or_else(|| Error::Snapshot("truncated binary snapshot".into()))?;
    *pos = end;
    Ok(slice.try_into().expect("length checked"))
}

fn read_binary(bytes: &[u8]) -> Result<Vec<SpectralField>> {
    let mut pos = 4;
    let version = u32::from_le_bytes(take(bytes, &mut pos)?);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported snapshot version {version}")));
    }
    let n = u32::from_le_bytes(take(bytes, &mut pos)?) as usize;
    let ncomp = u32::from_le_bytes(take(bytes, &mut pos)?) as usize;
    let count = u64::from_le_bytes(take(bytes, &mut pos)?) as usize;
    let mut rows = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        let mut k = [0i64; 3];
        for kk in k.iter_mut() {
            *kk = i64::from_le_bytes(take(bytes, &mut pos)?);
        }
        let c = u32::from_le_bytes(take(bytes, &mut pos)?) as usize;
        let re = f64::from_le_bytes(take(bytes, &mut pos)?);
        let im = f64::from_le_bytes(take(bytes, &mut pos)?);
        rows.push((k, c, Complex64::new(re, im)));
    }
    if pos != bytes.len() {
        return Err(Error::Snapshot("trailing bytes after snapshot rows".into()));
    }
    assemble(n, ncomp, rows)
}

fn read_text(bytes: &[u8]) -> Result<Vec<SpectralField>> {
    let mut lines = BufReader::new(bytes).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Snapshot("empty snapshot".into()))??;
    let mut n = None;
    let mut ncomp = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("N=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("ncomp=") {
            ncomp = v.parse::<usize>().ok();
        }
    }
    let (Some(n), Some(ncomp)) = (n, ncomp) else {
        return Err(Error::Snapshot(format!("bad snapshot header: {header}")));
    };
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Snapshot(format!("malformed row {}: {line}", lineno + 2));
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 6 {
            return Err(bad());
        }
        let k = [
            tok[0].parse().map_err(|_| bad())?,
            tok[1].parse().map_err(|_| bad())?,
            tok[2].parse().map_err(|_| bad())?,
        ];
        let c: usize = tok[3].parse().map_err(|_| bad())?;
        let re: f64 = tok[4].parse().map_err(|_| bad())?;
        let im: f64 = tok[5].parse().map_err(|_| bad())?;
        rows.push((k, c, Complex64::new(re, im)));
    }
    assemble(n, ncomp, rows)
}

pub fn write_vector_snapshot(path: &Path, u: &SpectralVectorField, format: SnapshotFormat) -> Result<()> {
    let [a, b, c] = u.components();
    write_snapshot(path, &[a, b, c], format)
}

pub fn read_vector_snapshot(path: &Path) -> Result<SpectralVectorField> {
    let comps = read_snapshot(path)?;
    let n = comps.len();
    let arr: [SpectralField; 3] = comps
        .try_into()
        .map_err(|_| Error::Snapshot(format!("expected 3 components, found {n}")))?;
    SpectralVectorField::from_components(arr)
}
