//! File formats.
//!
//! JSON documents `{dim, n_points, values: [re, im, re, im, ...]}` hold either
//! grid samples (row-major) or coefficients (FFT storage order). The binary
//! variant is a 16-byte header (magic `PDGF`, then `version`, `dim`, `N` as
//! little-endian `u32`) followed by interleaved little-endian `f64` pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, SpectralFunction, TorusGrid};

pub const MAGIC: &[u8; 4] = b"PDGF";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub dim: usize,
    pub n_points: usize,
    pub values: Vec<f64>,
}

fn interleave(values: &[Complex64]) -> Vec<f64> {
    values.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn deinterleave(values: &[f64]) -> Result<Vec<Complex64>> {
    if !values.len().is_multiple_of(2) {
        return Err(Error::Format("odd number of floats in complex array".into()));
    }
    Ok(values.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

impl FunctionDoc {
    pub fn from_grid_function(f: &GridFunction) -> Self {
        Self { dim: f.grid().dim(), n_points: f.grid().n(), values: interleave(f.values()) }
    }

    pub fn from_spectral(s: &SpectralFunction) -> Self {
        Self { dim: s.grid().dim(), n_points: s.grid().n(), values: interleave(s.coeffs()) }
    }

    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.dim, self.n_points)
    }

    pub fn to_grid_function(&self) -> Result<GridFunction> {
        GridFunction::new(self.grid()?, deinterleave(&self.values)?)
    }

    pub fn to_spectral(&self) -> Result<SpectralFunction> {
        SpectralFunction::new(self.grid()?, deinterleave(&self.values)?)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

pub fn write_grid_function_json(path: &Path, f: &GridFunction) -> Result<()> {
    write_json(path, &FunctionDoc::from_grid_function(f))
}

pub fn read_grid_function_json(path: &Path) -> Result<GridFunction> {
    read_json::<FunctionDoc>(path)?.to_grid_function()
}

pub fn encode_binary(grid: &TorusGrid, values: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 16 * values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    for z in values {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<(TorusGrid, Vec<Complex64>)> {
    if bytes.len() < 16 || &bytes[0..4] != MAGIC {
        return Err(Error::Format("missing PDGF header".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4-byte slice"));
    let version = word(4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported PDGF version {version}")));
    }
    let grid = TorusGrid::new(word(8) as usize, word(12) as usize)?;
    let body = &bytes[16..];
    if body.len() != 16 * grid.len() {
        return Err(Error::SizeMismatch { expected: grid.len(), actual: body.len() / 16 });
    }
    let values = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[0..8].try_into().expect("8-byte slice"));
            let im = f64::from_le_bytes(c[8..16].try_into().expect("8-byte slice"));
            Complex64::new(re, im)
        })
        .collect();
    Ok((grid, values))
}

pub fn write_grid_function_binary(path: &Path, f: &GridFunction) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&encode_binary(f.grid(), f.values()))?;
    w.flush()?;
    Ok(())
}

pub fn read_grid_function_binary(path: &Path) -> Result<GridFunction> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let (grid, values) = decode_binary(&bytes)?;
    GridFunction::new(grid, values)
}

/// Reads either format, choosing by the leading bytes.
pub fn read_grid_function(path: &Path) -> Result<GridFunction> {
    let mut head = [0u8; 4];
    let n = File::open(path)?.read(&mut head)?;
    if n == 4 && &head == MAGIC {
        read_grid_function_binary(path)
    } else {
        read_grid_function_json(path)
    }
}

/// A symbol sampled on grid × lattice: one row per grid point `x`, each row
/// the interleaved values `a(x, η)` over the lattice in FFT order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledSymbolDoc {
    pub dim: usize,
    pub n_points: usize,
    pub order: f64,
    pub values: Vec<Vec<f64>>,
}

impl SampledSymbolDoc {
    /// Rows as complex values, validated against the grid.
    pub fn rows(&self) -> Result<(TorusGrid, Vec<Vec<Complex64>>)> {
        let grid = TorusGrid::new(self.dim, self.n_points)?;
        if self.values.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), actual: self.values.len() });
        }
        let mut rows = Vec::with_capacity(grid.len());
        for r in &self.values {
            let row = deinterleave(r)?;
            if row.len() != grid.len() {
                return Err(Error::SizeMismatch { expected: grid.len(), actual: row.len() });
            }
            crate::grid::check_finite(&row)?;
            rows.push(row);
        }
        Ok((grid, rows))
    }
}

/// Serde adapter for exponents in `(0, ∞]`: infinity is written as `"inf"`.
pub mod exponent {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => parse(&t).map_err(serde::de::Error::custom),
        }
    }

    /// `"inf"`, `"infinity"` or `"∞"` (any case) or a decimal number.
    pub fn parse(t: &str) -> std::result::Result<f64, String> {
        match t.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
            other => other.parse::<f64>().map_err(|e| format!("bad exponent {t:?}: {e}")),
        }
    }
}
