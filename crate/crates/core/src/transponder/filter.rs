//! FIR realization of frequency masks and circular convolution.

use crate::error::{Error, Result};
use crate::Complex;
use std::f64::consts::PI;

/// One sample of a filter frequency mask. Masks are symmetric in frequency;
/// points are given for f >= 0 and mirrored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskPoint {
    pub freq_hz: f64,
    pub gain_db: f64,
    pub group_delay_s: f64,
}

/// Circular convolution of `x` with a real centered kernel: the kernel's
/// middle tap aligns with zero delay, so linear-phase masks leave symbol
/// timing untouched.
pub fn cyclic_fir(x: &[Complex], taps: &[f64]) -> Vec<Complex> {
    let n = x.len();
    let center = (taps.len() - 1) / 2;
    let mut y = vec![Complex::new(0.0, 0.0); n];
    for (j, &t) in taps.iter().enumerate() {
        if t == 0.0 {
            continue;
        }
        // y[n] += t * x[n + center - j] (mod n)
        let shift = (n + center - j % n) % n;
        for i in 0..n {
            y[i] += t * x[(i + shift) % n];
        }
    }
    y
}

/// Complex-kernel variant used by equalizer front ends.
pub fn cyclic_fir_complex(x: &[Complex], taps: &[Complex]) -> Vec<Complex> {
    let n = x.len();
    let center = (taps.len() - 1) / 2;
    let mut y = vec![Complex::new(0.0, 0.0); n];
    for (j, &t) in taps.iter().enumerate() {
        if t.norm_sqr() == 0.0 {
            continue;
        }
        let shift = (n + center - j % n) % n;
        for i in 0..n {
            y[i] += t * x[(i + shift) % n];
        }
    }
    y
}

/// Interpolates the mask gain (dB) and group delay at |f|; beyond the last
/// point the mask holds its last value.
fn mask_lookup(points: &[MaskPoint], f: f64) -> (f64, f64) {
    let f = f.abs();
    if f <= points[0].freq_hz {
        return (points[0].gain_db, points[0].group_delay_s);
    }
    for w in points.windows(2) {
        if f <= w[1].freq_hz {
            let t = (f - w[0].freq_hz) / (w[1].freq_hz - w[0].freq_hz);
            return (
                w[0].gain_db + t * (w[1].gain_db - w[0].gain_db),
                w[0].group_delay_s + t * (w[1].group_delay_s - w[0].group_delay_s),
            );
        }
    }
    let last = points.last().unwrap();
    (last.gain_db, last.group_delay_s)
}

/// Designs a real FIR realizing the mask by frequency sampling with a Hann
/// window. Zero group delay gives a linear-phase (symmetric) filter;
/// nonzero group-delay samples add the corresponding odd phase ripple.
pub fn design_mask_fir(points: &[MaskPoint], sample_rate: f64, fir_len: usize) -> Result<Vec<f64>> {
    if points.len() < 2 {
        return Err(Error::invalid("frequency mask needs at least two points"));
    }
    for w in points.windows(2) {
        if w[1].freq_hz <= w[0].freq_hz {
            return Err(Error::invalid("mask frequencies must be strictly increasing"));
        }
    }
    if fir_len < 9 || fir_len % 2 == 0 {
        return Err(Error::invalid("fir_len must be odd and >= 9"));
    }
    let m = 4096usize;
    let center = (fir_len - 1) / 2;
    // Phase from the group delay: phi(f) = -2 pi int_0^f gd df, odd in f.
    let mut h = vec![0.0f64; fir_len];
    // Precompute magnitude/phase on the DFT bins (k up to m/2; mirror for
    // negative frequencies to keep the response Hermitian).
    let mut mag = vec![0.0f64; m / 2 + 1];
    let mut phase = vec![0.0f64; m / 2 + 1];
    let mut gd_accum = 0.0;
    let mut prev_f = 0.0;
    let mut prev_gd = mask_lookup(points, 0.0).1;
    for k in 0..=m / 2 {
        let f = k as f64 * sample_rate / m as f64;
        let (gain_db, gd) = mask_lookup(points, f);
        mag[k] = 10f64.powf(gain_db / 20.0);
        gd_accum += 0.5 * (gd + prev_gd) * (f - prev_f);
        phase[k] = -2.0 * PI * gd_accum;
        prev_f = f;
        prev_gd = gd;
    }
    for (n, hn) in h.iter_mut().enumerate() {
        let d = n as f64 - center as f64;
        let mut acc = mag[0] * phase[0].cos();
        for k in 1..m / 2 {
            let ang = 2.0 * PI * k as f64 * d / m as f64 + phase[k];
            acc += 2.0 * mag[k] * ang.cos();
        }
        acc += mag[m / 2] * (PI * d + phase[m / 2]).cos();
        // Hann window against frequency-sampling ringing.
        let w = 0.5 * (1.0 + (PI * d / (center as f64 + 1.0)).cos());
        *hn = acc / m as f64 * w;
    }
    Ok(h)
}

/// Frequency response magnitude of real taps at `f` (for tests and
/// diagnostics).
pub fn fir_gain_at(taps: &[f64], sample_rate: f64, f: f64) -> f64 {
    let center = (taps.len() - 1) / 2;
    let mut acc = Complex::new(0.0, 0.0);
    for (n, &t) in taps.iter().enumerate() {
        let ang = -2.0 * PI * f * (n as f64 - center as f64) / sample_rate;
        acc += t * Complex::from_polar(1.0, ang);
    }
    acc.norm()
}
