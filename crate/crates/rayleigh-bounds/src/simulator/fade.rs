//! Binary dump of fading realizations.
//!
//! Layout: 32-byte header {magic "FADE", version u32, N u64, f_d f64,
//! seed u64}, then N little-endian complex64 (re, im as f32) pairs.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex32;

use crate::error::{Error, Result};

use super::FadingRealization;

pub const FADE_MAGIC: [u8; 4] = *b"FADE";
pub const FADE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadeHeader {
    pub version: u32,
    pub n: u64,
    pub f_d: f64,
    pub seed: u64,
}

pub fn write_fade<W: Write>(mut w: W, real: &FadingRealization) -> Result<()> {
    w.write_all(&FADE_MAGIC)?;
    w.write_u32::<LittleEndian>(FADE_VERSION)?;
    w.write_u64::<LittleEndian>(real.h.len() as u64)?;
    w.write_f64::<LittleEndian>(real.model.f_d())?;
    w.write_u64::<LittleEndian>(real.seed)?;
    for c in &real.h {
        w.write_f32::<LittleEndian>(c.re as f32)?;
        w.write_f32::<LittleEndian>(c.im as f32)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_fade<R: Read>(mut r: R) -> Result<(FadeHeader, Vec<Complex32>)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != FADE_MAGIC {
        return Err(Error::Io(format!("bad magic {magic:?}")));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != FADE_VERSION {
        return Err(Error::Io(format!("unsupported FADE version {version}")));
    }
    let n = r.read_u64::<LittleEndian>()?;
    let f_d = r.read_f64::<LittleEndian>()?;
    let seed = r.read_u64::<LittleEndian>()?;
    let mut h = Vec::with_capacity(n.min(1 << 24) as usize);
    for _ in 0..n {
        let re = r.read_f32::<LittleEndian>()?;
        let im = r.read_f32::<LittleEndian>()?;
        h.push(Complex32::new(re, im));
    }
    Ok((FadeHeader { version, n, f_d, seed }, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PsdModel;
    use crate::simulator::gen_fading;

    #[test]
    fn round_trip() {
        let m = PsdModel::rectangular(0.1, 1.0).unwrap();
        let real = gen_fading(&m, 64, 42).unwrap();
        let mut buf = Vec::new();
        write_fade(&mut buf, &real).unwrap();
        assert_eq!(buf.len(), 32 + 64 * 8);
        let (hdr, h) = read_fade(&buf[..]).unwrap();
        assert_eq!(hdr, FadeHeader { version: 1, n: 64, f_d: 0.1, seed: 42 });
        for (a, b) in real.h.iter().zip(&h) {
            assert_eq!(a.re as f32, b.re);
            assert_eq!(a.im as f32, b.im);
        }
        buf[0] = b'X';
        assert!(read_fade(&buf[..]).is_err());
    }
}
