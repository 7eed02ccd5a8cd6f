//! Downlink combining, FDM composition, and waveform statistics.

use super::WaveformFrame;
use crate::error::{Error, Result};
use crate::rng::complex_gaussian;
use crate::strategies::grid_tau;
use crate::Complex;
use rand::Rng;
use std::f64::consts::TAU;

/// Noise calibration for a downlink run: the per-sample noise variance is
/// chosen so that `reference_power / (N0 W) = snr`, with W the stated noise
/// bandwidth. For linear runs the reference is the signal power; for
/// transponder runs it is the HPA saturation power.
#[derive(Debug, Clone, Copy)]
pub struct NoiseCalibration {
    pub snr_db: f64,
    pub reference_power: f64,
    pub noise_bandwidth_hz: f64,
}

impl NoiseCalibration {
    /// Per-sample complex noise variance at the given sample rate.
    pub fn sample_variance(&self, sample_rate: f64) -> f64 {
        let snr = crate::units::db_to_linear(self.snr_db);
        let n = self.reference_power / snr; // N = N0 W
        n * (sample_rate / self.noise_bandwidth_hz)
    }
}

/// Holds per-symbol phases constant over each symbol's samples.
pub fn upsample_phases(per_symbol: &[f64], sps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(per_symbol.len() * sps);
    for &p in per_symbol {
        out.extend(std::iter::repeat(p).take(sps));
    }
    out
}

/// y[n] = s1[n] + gamma e^{j phi[n]} s2[n - tau] + w[n], with the delay
/// wrapping on the circular frame and the noise calibrated per `noise`.
pub fn combine_downlink(
    s1: &WaveformFrame,
    s2: &WaveformFrame,
    gamma: f64,
    phase: &[f64],
    tau_samples: f64,
    noise: Option<&NoiseCalibration>,
    rng: &mut impl Rng,
) -> Result<WaveformFrame> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma must be in [0, 1], got {gamma}")));
    }
    if (s1.sample_rate() - s2.sample_rate()).abs() > 1e-6 * s1.sample_rate()
        || s1.samples.len() != s2.samples.len()
    {
        return Err(Error::invalid(
            "downlink frames must share sample rate and length",
        ));
    }
    if phase.len() != s1.samples.len() {
        return Err(Error::invalid(format!(
            "phase realization length {} != frame length {}",
            phase.len(),
            s1.samples.len()
        )));
    }
    let tau = grid_tau(tau_samples)?;
    let n = s1.samples.len();
    let sigma2 = noise.map(|c| c.sample_variance(s1.sample_rate()));
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let delayed = s2.samples[(i + n - tau % n) % n];
        let mut y = s1.samples[i] + Complex::from_polar(gamma, phase[i]) * delayed;
        if let Some(v) = sigma2 {
            y += complex_gaussian(rng, v);
        }
        samples.push(y);
    }
    Ok(WaveformFrame {
        samples,
        samples_per_symbol: s1.samples_per_symbol,
        baud_rate: s1.baud_rate,
        center_offset: 0.0,
    })
}

/// Shifts a frame by `offset_hz` (multiplication by a complex exponential).
pub fn frequency_shift(frame: &WaveformFrame, offset_hz: f64) -> WaveformFrame {
    let fs = frame.sample_rate();
    let samples = frame
        .samples
        .iter()
        .enumerate()
        .map(|(i, &s)| s * Complex::from_polar(1.0, TAU * offset_hz * i as f64 / fs))
        .collect();
    WaveformFrame {
        samples,
        samples_per_symbol: frame.samples_per_symbol,
        baud_rate: frame.baud_rate,
        center_offset: frame.center_offset + offset_hz,
    }
}

/// FDM composition: s1 shifted to +fc/2, s2 to -fc/2, then combined as a
/// downlink (no delay). Errors when a shifted branch would not fit in the
/// sampled band.
pub fn fdm_compose(
    s1: &WaveformFrame,
    s2: &WaveformFrame,
    fc: f64,
    gamma: f64,
    phase: &[f64],
    noise: Option<&NoiseCalibration>,
    rng: &mut impl Rng,
) -> Result<WaveformFrame> {
    let fs = s1.sample_rate();
    for f in [s1, s2] {
        // Occupied band estimate covers roll-offs up to 0.5.
        let edge = fc.abs() / 2.0 + 0.75 * f.baud_rate;
        if edge > fs / 2.0 {
            return Err(Error::invalid(format!(
                "FDM branch at +-{}/2 Hz exceeds the sampled band (fs = {fs} Hz)",
                fc
            )));
        }
    }
    let up = frequency_shift(s1, fc / 2.0);
    let down = frequency_shift(s2, -fc / 2.0);
    combine_downlink(&up, &down, gamma, phase, 0.0, noise, rng)
}

/// Empirical amplitude statistics of a frame.
#[derive(Debug, Clone)]
pub struct AmplitudeDistribution {
    /// Normalized amplitudes, sorted ascending.
    pub sorted: Vec<f64>,
    pub bin_centers: Vec<f64>,
    pub pdf: Vec<f64>,
}

impl AmplitudeDistribution {
    /// Empirical CDF at x.
    pub fn cdf(&self, x: f64) -> f64 {
        let idx = self.sorted.partition_point(|&a| a <= x);
        idx as f64 / self.sorted.len() as f64
    }

    /// Kolmogorov-Smirnov distance to a reference CDF.
    pub fn ks_distance(&self, reference: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = reference(x);
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            d = d.max((f - lo).abs()).max((hi - f).abs());
        }
        d
    }
}

/// Histogram and empirical CDF of |y| / scale. Requires at least 1e5
/// samples so the tails are populated.
pub fn amplitude_distribution(frame: &WaveformFrame, scale: f64) -> Result<AmplitudeDistribution> {
    if frame.samples.len() < 100_000 {
        return Err(Error::invalid(format!(
            "amplitude statistics need >= 1e5 samples, got {}",
            frame.samples.len()
        )));
    }
    if !(scale > 0.0) {
        return Err(Error::invalid("scale must be positive"));
    }
    let mut sorted: Vec<f64> = frame.samples.iter().map(|s| s.norm() / scale).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max = *sorted.last().unwrap();
    let bins = 200;
    let width = (max / bins as f64).max(1e-12);
    let mut counts = vec![0usize; bins];
    for &a in &sorted {
        let b = ((a / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let n = sorted.len() as f64;
    let pdf = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let bin_centers = (0..bins).map(|b| (b as f64 + 0.5) * width).collect();
    Ok(AmplitudeDistribution {
        sorted,
        bin_centers,
        pdf,
    })
}

// ---------------------------------------------------------------------------
// Spectral accounting
// ---------------------------------------------------------------------------

fn fft_pow2(buf: &mut [Complex]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -TAU / len as f64;
        let wl = Complex::from_polar(1.0, ang);
        let mut i = 0;
        while i < n {
            let mut w = Complex::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wl;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Fraction of the frame's power inside [-band_hz/2, band_hz/2], from a
/// Hann-windowed Welch periodogram.
pub fn band_power_fraction(frame: &WaveformFrame, band_hz: f64) -> Result<f64> {
    let seg = 4096usize;
    if frame.samples.len() < seg {
        return Err(Error::invalid(format!(
            "band power needs at least {seg} samples"
        )));
    }
    let fs = frame.sample_rate();
    let window: Vec<f64> = (0..seg)
        .map(|i| 0.5 * (1.0 - (TAU * i as f64 / seg as f64).cos()))
        .collect();
    let mut psd = vec![0.0f64; seg];
    let hop = seg / 2;
    let mut n_segs = 0;
    let mut start = 0;
    while start + seg <= frame.samples.len() {
        let mut buf: Vec<Complex> = (0..seg)
            .map(|i| frame.samples[start + i] * window[i])
            .collect();
        fft_pow2(&mut buf);
        for (p, b) in psd.iter_mut().zip(&buf) {
            *p += b.norm_sqr();
        }
        n_segs += 1;
        start += hop;
    }
    if n_segs == 0 {
        return Err(Error::invalid("frame shorter than one periodogram segment"));
    }
    let mut in_band = 0.0;
    let mut total = 0.0;
    for (k, &p) in psd.iter().enumerate() {
        // FFT bin k maps to frequency k fs / seg, wrapped to [-fs/2, fs/2).
        let f = if k < seg / 2 {
            k as f64 * fs / seg as f64
        } else {
            (k as f64 - seg as f64) * fs / seg as f64
        };
        total += p;
        if f.abs() <= band_hz / 2.0 {
            in_band += p;
        }
    }
    Ok(in_band / total)
}
