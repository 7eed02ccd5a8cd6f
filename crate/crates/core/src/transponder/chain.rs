//! The IMUX -> IBO scaling -> HPA -> OMUX chain.

use super::{cyclic_fir, TransponderSpec, WaveformFrame};
use crate::error::{Error, Result};

/// Passes a frame through the transponder: IMUX filtering, scaling to the
/// input back-off operating point, the memoryless AM/AM + AM/PM
/// nonlinearity, then the OMUX filter. The frame must be oversampled at
/// 4+ samples/symbol so the spectral regrowth stays representable.
pub fn apply_transponder(frame: &WaveformFrame, spec: &TransponderSpec) -> Result<WaveformFrame> {
    if frame.samples_per_symbol < 4 {
        return Err(Error::invalid(format!(
            "transponder simulation needs >= 4 samples/symbol, got {}",
            frame.samples_per_symbol
        )));
    }
    let fs = frame.sample_rate();
    let imux_taps = spec.imux.to_taps(fs)?;
    let omux_taps = spec.omux.to_taps(fs)?;

    let filtered = cyclic_fir(&frame.samples, &imux_taps);
    let power: f64 = filtered.iter().map(|s| s.norm_sqr()).sum::<f64>() / filtered.len() as f64;
    if power <= 0.0 {
        return Err(Error::invalid("zero-power frame into the HPA"));
    }
    // Average input power sits ibo_db below the HPA input saturation power.
    let sat_in = spec.hpa.input_saturation_amplitude();
    let target = sat_in * sat_in * 10f64.powf(-spec.ibo_db / 10.0);
    let gain = (target / power).sqrt();

    let mut amplified = Vec::with_capacity(filtered.len());
    for &s in &filtered {
        amplified.push(spec.hpa.apply(s * gain)?);
    }
    let out = cyclic_fir(&amplified, &omux_taps);
    Ok(WaveformFrame {
        samples: out,
        samples_per_symbol: frame.samples_per_symbol,
        baud_rate: frame.baud_rate,
        center_offset: frame.center_offset,
    })
}
