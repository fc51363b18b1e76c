//! Binary snapshot of a [`JointWavefunction`]. The layout is described in
//! `docs/checkpoint-format.md`: a 64-byte little-endian header followed by
//! `N_x·N_y` pairs of f64 (re, im) in row-major order.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rustfft::num_complex::Complex;

use super::grid::{Axis, JointWavefunction};
use crate::error::{PhaseError, Result};
use crate::scalar::Real;

pub const MAGIC: [u8; 4] = *b"ABPH";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointHeader {
    pub version: u32,
    pub nx: u32,
    pub ny: u32,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub time: f64,
}

impl CheckpointHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4..8].copy_from_slice(&self.version.to_le_bytes());
        b[8..12].copy_from_slice(&self.nx.to_le_bytes());
        b[12..16].copy_from_slice(&self.ny.to_le_bytes());
        for (k, v) in [self.x_min, self.x_max, self.y_min, self.y_max, self.time]
            .iter()
            .enumerate()
        {
            b[16 + 8 * k..24 + 8 * k].copy_from_slice(&v.to_le_bytes());
        }
        b
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self> {
        if b.len() < HEADER_LEN {
            return Err(PhaseError::Checkpoint(format!(
                "header is {} bytes, expected {HEADER_LEN}",
                b.len()
            )));
        }
        if b[0..4] != MAGIC {
            return Err(PhaseError::Checkpoint("bad magic, not an ABPH file".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().expect("4 bytes"));
        let f64_at = |o: usize| f64::from_le_bytes(b[o..o + 8].try_into().expect("8 bytes"));
        let version = u32_at(4);
        if version != VERSION {
            return Err(PhaseError::Checkpoint(format!(
                "unsupported version {version}"
            )));
        }
        Ok(Self {
            version,
            nx: u32_at(8),
            ny: u32_at(12),
            x_min: f64_at(16),
            x_max: f64_at(24),
            y_min: f64_at(32),
            y_max: f64_at(40),
            time: f64_at(48),
        })
    }

    fn payload_len(&self) -> usize {
        self.nx as usize * self.ny as usize * 16
    }
}

fn header_of<T: Real>(psi: &JointWavefunction<T>) -> Result<CheckpointHeader> {
    let (nx, ny) = psi.shape();
    let dim = |n: usize| {
        u32::try_from(n).map_err(|_| PhaseError::Checkpoint(format!("grid size {n} exceeds u32")))
    };
    Ok(CheckpointHeader {
        version: VERSION,
        nx: dim(nx)?,
        ny: dim(ny)?,
        x_min: psi.x_axis().min().as_f64(),
        x_max: psi.x_axis().max().as_f64(),
        y_min: psi.y_axis().min().as_f64(),
        y_max: psi.y_axis().max().as_f64(),
        time: psi.time().as_f64(),
    })
}

pub fn to_bytes<T: Real>(psi: &JointWavefunction<T>) -> Result<Vec<u8>> {
    let header = header_of(psi)?;
    let mut out = Vec::with_capacity(HEADER_LEN + header.payload_len());
    out.extend_from_slice(&header.to_bytes());
    for c in psi.data() {
        out.extend_from_slice(&c.re.as_f64().to_le_bytes());
        out.extend_from_slice(&c.im.as_f64().to_le_bytes());
    }
    Ok(out)
}

pub fn from_bytes<T: Real>(b: &[u8]) -> Result<JointWavefunction<T>> {
    let h = CheckpointHeader::from_bytes(b)?;
    let body = &b[HEADER_LEN..];
    if body.len() != h.payload_len() {
        return Err(PhaseError::Checkpoint(format!(
            "payload is {} bytes, header implies {}",
            body.len(),
            h.payload_len()
        )));
    }
    let cvt = |v: f64| {
        T::from_f64(v).ok_or_else(|| PhaseError::Checkpoint(format!("value {v} not representable")))
    };
    let axis = |lo: f64, hi: f64, n: u32| -> Result<Axis<T>> {
        Axis::new(cvt(lo)?, cvt(hi)?, n as usize).map_err(|e| PhaseError::Checkpoint(e.to_string()))
    };
    let x = axis(h.x_min, h.x_max, h.nx)?;
    let y = axis(h.y_min, h.y_max, h.ny)?;
    let data = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[0..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..16].try_into().expect("8 bytes"));
            Ok(Complex::new(cvt(re)?, cvt(im)?))
        })
        .collect::<Result<Vec<_>>>()?;
    JointWavefunction::new(x, y, data, cvt(h.time)?)
}

pub fn write<T: Real>(path: impl AsRef<Path>, psi: &JointWavefunction<T>) -> Result<()> {
    let bytes = to_bytes(psi)?;
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

pub fn read<T: Real>(path: impl AsRef<Path>) -> Result<JointWavefunction<T>> {
    from_bytes(&fs::read(path)?)
}

pub fn read_header(path: impl AsRef<Path>) -> Result<CheckpointHeader> {
    let mut b = [0u8; HEADER_LEN];
    let mut f = fs::File::open(path)?;
    f.read_exact(&mut b)
        .map_err(|e| PhaseError::Checkpoint(format!("truncated header: {e}")))?;
    CheckpointHeader::from_bytes(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let x = Axis::new(-2.0f64, 2.0, 8).unwrap();
        let y = Axis::new(0.0, 1.0, 4).unwrap();
        let psi = JointWavefunction::from_fn(x, y, |a, b| Complex::new(a.sin() + b, a * b - 0.3));
        let bytes = to_bytes(&psi).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN + 8 * 4 * 16);
        assert_eq!(&bytes[0..4], b"ABPH");
        let back: JointWavefunction<f64> = from_bytes(&bytes).unwrap();
        assert_eq!(back, psi);
    }

    #[test]
    fn rejects_corruption() {
        let x = Axis::new(0.0, 1.0, 4).unwrap();
        let psi = JointWavefunction::from_fn(x, x, |_, _| Complex::new(1.0, 0.0));
        let mut bytes = to_bytes(&psi).unwrap();
        bytes.pop();
        assert!(matches!(
            from_bytes::<f64>(&bytes),
            Err(PhaseError::Checkpoint(_))
        ));
        bytes[0] = b'X';
        assert!(from_bytes::<f64>(&bytes).is_err());
    }
}
