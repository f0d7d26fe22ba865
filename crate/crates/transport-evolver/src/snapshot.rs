//! Binary `θ̂` snapshots: a 16-byte header `{magic, version, Nz, Ny}` of
//! little-endian `u32`, the time as `f64`, then `Nz·(Ny−1)` complex
//! coefficients as `(re, im)` pairs.

use crate::{EvolverError, Result};
use fourier_core::{Grid, SpectralField};
use num_complex::Complex64;
use std::io::{Read, Write};

pub const SNAPSHOT_MAGIC: u32 = u32::from_le_bytes(*b"STXS");
pub const SNAPSHOT_VERSION: u32 = 1;

fn io(e: std::io::Error) -> EvolverError {
    EvolverError::Snapshot(e.to_string())
}

pub fn write_snapshot(w: &mut impl Write, t: f64, f: &SpectralField) -> Result<()> {
    let dim = |n: usize| u32::try_from(n).map_err(|_| EvolverError::Snapshot(format!("dimension {n} too large")));
    let mut buf = Vec::with_capacity(24 + 16 * f.data.len());
    for v in [SNAPSHOT_MAGIC, SNAPSHOT_VERSION, dim(f.grid.nz)?, dim(f.grid.ny)?] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&t.to_le_bytes());
    for c in &f.data {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    w.write_all(&buf).map_err(io)
}

pub fn read_snapshot(r: &mut impl Read) -> Result<(f64, SpectralField)> {
    let mut head = [0u8; 24];
    r.read_exact(&mut head).map_err(io)?;
    let word = |i: usize| u32::from_le_bytes(head[4 * i..4 * i + 4].try_into().expect("4 bytes"));
    if word(0) != SNAPSHOT_MAGIC {
        return Err(EvolverError::Snapshot("bad magic".into()));
    }
    if word(1) != SNAPSHOT_VERSION {
        return Err(EvolverError::Snapshot(format!("unsupported version {}", word(1))));
    }
    let grid = Grid::unchecked(word(2) as usize, word(3) as usize).map_err(|e| EvolverError::Snapshot(e.to_string()))?;
    let t = f64::from_le_bytes(head[16..24].try_into().expect("8 bytes"));
    let mut f = SpectralField::zeros(grid);
    let mut body = vec![0u8; 16 * f.data.len()];
    r.read_exact(&mut body).map_err(io)?;
    for (c, chunk) in f.data.iter_mut().zip(body.chunks_exact(16)) {
        let re = f64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(chunk[8..].try_into().expect("8 bytes"));
        *c = Complex64::new(re, im);
    }
    Ok((t, f))
}
