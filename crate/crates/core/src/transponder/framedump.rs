//! Binary frame dumps: little-endian interleaved f64 I/Q pairs behind a
//! 32-byte header (magic, sps, version, baud, length).

use super::WaveformFrame;
use crate::error::{Error, Result};
use crate::Complex;
use std::io::{Read, Write};

const MAGIC: &[u8; 8] = b"TWINSATF";
const VERSION: u32 = 1;

pub fn write_frame(frame: &WaveformFrame, mut w: impl Write) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(frame.samples_per_symbol as u32).to_le_bytes())?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&frame.baud_rate.to_le_bytes())?;
    w.write_all(&(frame.samples.len() as u64).to_le_bytes())?;
    for s in &frame.samples {
        w.write_all(&s.re.to_le_bytes())?;
        w.write_all(&s.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_frame(mut r: impl Read) -> Result<WaveformFrame> {
    let mut header = [0u8; 32];
    r.read_exact(&mut header)?;
    if &header[0..8] != MAGIC {
        return Err(Error::invalid("bad frame magic"));
    }
    let sps = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let version = u32::from_le_bytes(header[12..16].try_into().unwrap());
    if version != VERSION {
        return Err(Error::invalid(format!("unsupported frame version {version}")));
    }
    let baud = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let len = u64::from_le_bytes(header[24..32].try_into().unwrap()) as usize;
    let mut buf = vec![0u8; len * 16];
    r.read_exact(&mut buf)?;
    let samples = buf
        .chunks_exact(16)
        .map(|c| {
            Complex::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    WaveformFrame::new(samples, sps, baud)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes() {
        let mut rng = crate::rng::seeded_rng(3, "dump");
        let samples: Vec<Complex> = (0..64)
            .map(|_| crate::rng::complex_gaussian(&mut rng, 1.0))
            .collect();
        let frame = WaveformFrame::new(samples, 4, 37e6).unwrap();
        let mut buf = Vec::new();
        write_frame(&frame, &mut buf).unwrap();
        assert_eq!(buf.len(), 32 + 64 * 16);
        let back = read_frame(buf.as_slice()).unwrap();
        assert_eq!(back.samples, frame.samples);
        assert_eq!(back.samples_per_symbol, 4);
        assert_eq!(back.baud_rate, 37e6);
    }

    #[test]
    fn rejects_foreign_bytes() {
        let junk = vec![0u8; 64];
        assert!(read_frame(junk.as_slice()).is_err());
    }
}
