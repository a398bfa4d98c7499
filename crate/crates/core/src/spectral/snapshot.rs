//! Binary field snapshots.
//!
//! One record per field: a 32-byte header (magic `OLDB`, format version u16,
//! dimension u8, rank u8, points-per-axis u32, 20 reserved bytes, all
//! little-endian) followed by the real-space samples as row-major f64,
//! component-major. A state snapshot is a velocity record followed by a
//! stress record in the same file.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{Grid, Rank, SpectralField};

pub const MAGIC: &[u8; 4] = b"OLDB";
pub const FORMAT_VERSION: u16 = 1;

fn rank_code(rank: Rank) -> u8 {
    match rank {
        Rank::Scalar => 0,
        Rank::Vector => 1,
        Rank::SymTensor => 2,
        Rank::Tensor => 3,
    }
}

fn rank_from_code(code: u8) -> Result<Rank> {
    match code {
        0 => Ok(Rank::Scalar),
        1 => Ok(Rank::Vector),
        2 => Ok(Rank::SymTensor),
        3 => Ok(Rank::Tensor),
        other => Err(Error::SnapshotFormat(format!("unknown rank code {other}"))),
    }
}

pub fn write_record<W: Write>(out: &mut W, field: &SpectralField) -> Result<()> {
    let grid = field.grid();
    let mut header = [0u8; 32];
    header[0..4].copy_from_slice(MAGIC);
    header[4..6].copy_from_slice(&FORMAT_VERSION.to_le_bytes());
    header[6] = grid.dim() as u8;
    header[7] = rank_code(field.rank());
    header[8..12].copy_from_slice(&(grid.points() as u32).to_le_bytes());
    out.write_all(&header)?;
    let (samples, _) = field.to_real();
    for s in &samples {
        out.write_all(&s.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_record<R: Read>(input: &mut R) -> Result<SpectralField> {
    let mut header = [0u8; 32];
    input.read_exact(&mut header)?;
    if &header[0..4] != MAGIC {
        return Err(Error::SnapshotFormat("bad magic".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != FORMAT_VERSION {
        return Err(Error::SnapshotFormat(format!("unsupported version {version}")));
    }
    let dim = header[6] as usize;
    let rank = rank_from_code(header[7])?;
    let points = u32::from_le_bytes([header[8], header[9], header[10], header[11]]) as usize;
    let grid = Grid::new(dim, points)
        .map_err(|e| Error::SnapshotFormat(format!("invalid grid in header: {e}")))?;
    let count = rank.components(dim) * grid.mode_count();
    let mut samples = vec![0.0f64; count];
    let mut buf = [0u8; 8];
    for s in samples.iter_mut() {
        input.read_exact(&mut buf)?;
        *s = f64::from_le_bytes(buf);
        if !s.is_finite() {
            return Err(Error::SnapshotFormat("non-finite sample".into()));
        }
    }
    SpectralField::from_real(&grid, rank, &samples)
}

pub fn write_field(path: &Path, field: &SpectralField) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_record(&mut out, field)?;
    out.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    let mut input = BufReader::new(File::open(path)?);
    read_record(&mut input)
}

/// Write a `(u, tau)` pair as two consecutive records.
pub fn write_state_fields(path: &Path, u: &SpectralField, tau: &SpectralField) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_record(&mut out, u)?;
    write_record(&mut out, tau)?;
    out.flush()?;
    Ok(())
}

/// Read a `(u, tau)` pair; validates ranks and matching grids.
pub fn read_state_fields(path: &Path) -> Result<(SpectralField, SpectralField)> {
    let mut input = BufReader::new(File::open(path)?);
    let u = read_record(&mut input)?;
    let tau = read_record(&mut input)?;
    if u.rank() != Rank::Vector {
        return Err(Error::SnapshotFormat(format!("first record must be a vector, got {:?}", u.rank())));
    }
    if tau.rank() != Rank::SymTensor {
        return Err(Error::SnapshotFormat(format!(
            "second record must be a symmetric tensor, got {:?}",
            tau.rank()
        )));
    }
    if u.grid() != tau.grid() {
        return Err(Error::SnapshotFormat("records live on different grids".into()));
    }
    Ok((u, tau))
}
