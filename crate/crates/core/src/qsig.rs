//! QSIG: a small binary container for quaternion fields.
//!
//! Layout (all little-endian):
//!
//! | offset | size | content                                   |
//! |--------|------|-------------------------------------------|
//! | 0      | 4    | ASCII `QSIG`                              |
//! | 4      | 4    | `u32` version, currently 1                |
//! | 8      | 8    | `u32` n1, `u32` n2                        |
//! | 16     | 32   | `f64` x1_min, x1_max, x2_min, x2_max      |
//! | 48     | 32·n1·n2 | planar `f64` payload: every q0 (row-major, x2 fastest), then q1, q2, q3 |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{Grid2D, QField};
use crate::quat::Quaternion;

pub const MAGIC: &[u8; 4] = b"QSIG";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 48;

/// Serializes `field` into its QSIG byte representation.
pub fn to_bytes(field: &QField<f64>) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 32 * grid.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for n in [grid.n1(), grid.n2()] {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    let (a, b) = grid.bounds(crate::field::Axis::X1);
    let (c, d) = grid.bounds(crate::field::Axis::X2);
    for v in [a, b, c, d] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let components: [fn(&Quaternion<f64>) -> f64; 4] = [|q| q.q0, |q| q.q1, |q| q.q2, |q| q.q3];
    for get in components {
        for q in field.values() {
            out.extend_from_slice(&get(q).to_le_bytes());
        }
    }
    out
}

/// Parses a complete QSIG byte buffer. Trailing bytes are rejected.
pub fn from_bytes(bytes: &[u8]) -> Result<QField<f64>> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "file is {} bytes, shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Format("bad magic, expected \"QSIG\"".into()));
    }
    let u32_at = |off: usize| u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
    let f64_at = |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n1 = u32_at(8) as usize;
    let n2 = u32_at(12) as usize;
    let ext = [f64_at(16), f64_at(24), f64_at(32), f64_at(40)];
    let grid = Grid2D::new(n1, n2, (ext[0], ext[1]), (ext[2], ext[3]))
        .map_err(|e| Error::Format(format!("bad header: {e}")))?;
    let count = n1
        .checked_mul(n2)
        .ok_or_else(|| Error::Format("node count overflows".into()))?;
    let expected = count
        .checked_mul(32)
        .and_then(|p| p.checked_add(HEADER_LEN))
        .ok_or_else(|| Error::Format("payload size overflows".into()))?;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "payload length mismatch: expected {expected} bytes for {n1}x{n2}, found {}",
            bytes.len()
        )));
    }
    let plane = |c: usize, i: usize| f64_at(HEADER_LEN + 8 * (c * count + i));
    let values = (0..count)
        .map(|i| Quaternion::new(plane(0, i), plane(1, i), plane(2, i), plane(3, i)))
        .collect();
    QField::new(grid, values).map_err(|e| Error::Format(format!("bad payload: {e}")))
}

pub fn write<W: Write>(field: &QField<f64>, mut w: W) -> Result<()> {
    w.write_all(&to_bytes(field))?;
    w.flush()?;
    Ok(())
}

pub fn read<R: Read>(mut r: R) -> Result<QField<f64>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

pub fn read_file(path: impl AsRef<Path>) -> Result<QField<f64>> {
    read(BufReader::new(File::open(path)?))
}

pub fn write_file(field: &QField<f64>, path: impl AsRef<Path>) -> Result<()> {
    write(field, BufWriter::new(File::create(path)?))
}
