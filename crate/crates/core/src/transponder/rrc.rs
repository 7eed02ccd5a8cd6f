//! Root-raised-cosine pulses and linear modulation.

use super::WaveformFrame;
use crate::error::{Error, Result};
use crate::Complex;
use std::f64::consts::PI;

/// Root-raised-cosine taps with roll-off `alpha`, spanning `span_symbols`
/// symbol intervals at `sps` samples per symbol (odd length, centered).
/// Normalized to continuous-time unit energy: sum taps^2 = sps, so a
/// TX-RX RRC cascade has unit gain at the symbol instants.
pub fn rrc_taps(alpha: f64, span_symbols: usize, sps: usize) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!("roll-off must be in (0, 1], got {alpha}")));
    }
    if sps < 1 {
        return Err(Error::invalid("sps must be >= 1"));
    }
    // The RRC tail decays too slowly for short spans at small roll-off;
    // truncation then breaks the Nyquist property.
    if (span_symbols as f64) * alpha < 2.0 {
        return Err(Error::invalid(format!(
            "span {span_symbols} too short for roll-off {alpha}: need span * alpha >= 2"
        )));
    }
    let half = (span_symbols * sps) / 2;
    let n = 2 * half + 1;
    let half_span = half as f64 / sps as f64;
    let mut taps = Vec::with_capacity(n);
    for i in 0..n {
        let t = (i as f64 - half as f64) / sps as f64; // in symbol units
        // Cosine taper over the outer 15% of the span suppresses the
        // truncation discontinuity that would otherwise leak ISI right at
        // the span edge.
        let edge = 0.85 * half_span;
        let w = if t.abs() <= edge {
            1.0
        } else {
            (0.5 * PI * (half_span - t.abs()) / (half_span - edge)).sin()
        };
        taps.push(w * rrc_value(t, alpha));
    }
    let energy: f64 = taps.iter().map(|&x| x * x).sum();
    let scale = (sps as f64 / energy).sqrt();
    for v in taps.iter_mut() {
        *v *= scale;
    }
    Ok(taps)
}

fn rrc_value(t: f64, a: f64) -> f64 {
    let singular = (4.0 * a * t).abs();
    if t.abs() < 1e-9 {
        1.0 + a * (4.0 / PI - 1.0)
    } else if (singular - 1.0).abs() < 1e-9 {
        let x = PI / (4.0 * a);
        (a / 2f64.sqrt()) * ((1.0 + 2.0 / PI) * x.sin() + (1.0 - 2.0 / PI) * x.cos())
    } else {
        let num = (PI * t * (1.0 - a)).sin() + 4.0 * a * t * (PI * t * (1.0 + a)).cos();
        let den = PI * t * (1.0 - (4.0 * a * t).powi(2));
        num / den
    }
}

/// Linear modulation onto a circular frame of length n_symbols * sps:
/// x[n] = sum_k s_k p[n - k sps], pulses wrapping at the frame edge.
pub fn modulate(symbols: &[Complex], pulse: &[f64], sps: usize, baud_rate: f64) -> Result<WaveformFrame> {
    if symbols.is_empty() {
        return Err(Error::invalid("no symbols to modulate"));
    }
    let len = symbols.len() * sps;
    if pulse.len() > len {
        return Err(Error::invalid(format!(
            "pulse ({} taps) longer than the frame ({len} samples)",
            pulse.len()
        )));
    }
    let center = (pulse.len() - 1) / 2;
    let mut samples = vec![Complex::new(0.0, 0.0); len];
    for (k, &s) in symbols.iter().enumerate() {
        if s.norm_sqr() == 0.0 {
            continue;
        }
        let base = k * sps + len - center;
        for (j, &p) in pulse.iter().enumerate() {
            samples[(base + j) % len] += s * p;
        }
    }
    WaveformFrame::new(samples, sps, baud_rate)
}

/// Matched filter (unit gain for the given pulse) sampled back at the
/// symbol instants; the circular-frame counterpart of RRC receive
/// filtering plus symbol-rate sampling.
pub fn matched_filter_output(frame: &WaveformFrame, pulse: &[f64]) -> Vec<Complex> {
    let scaled: Vec<f64> = pulse
        .iter()
        .map(|&p| p / frame.samples_per_symbol as f64)
        .collect();
    let filtered = super::filter::cyclic_fir(&frame.samples, &scaled);
    (0..frame.n_symbols())
        .map(|k| filtered[k * frame.samples_per_symbol])
        .collect()
}
