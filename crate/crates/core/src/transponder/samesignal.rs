//! Same-signal transmission: the time-varying frequency-selective channel
//! matrix and its ergodic rate bound.
//!
//! When both satellites relay one signal, the receiver sees
//! H = I + gamma Phi Htilde with Phi = diag(e^{j phi_k}) and Htilde the
//! Toeplitz matrix of sinc((i - k) - tau/T) samples. The Gaussian-input
//! rate (1/n) sum log2(1 + sigma_k^2 snr) is evaluated through the
//! log-determinant of I + snr H^H H, and compared against the
//! independent-signal rate log2(1 + (1 + gamma^2) snr).

use crate::error::{Error, Result};
use crate::numeric::{log2_det_hermitian, sinc};
use crate::Complex;

/// The channel matrix of a same-signal transmission, with its unbalance.
#[derive(Debug, Clone)]
pub struct SameSignalMatrix {
    data: Vec<Complex>,
    n: usize,
    gamma: f64,
}

/// Builds H = I + gamma Phi Htilde for `n` symbols, delay `tau_over_t`
/// symbol intervals, and per-symbol phases.
pub fn same_signal_matrix(
    n: usize,
    gamma: f64,
    tau_over_t: f64,
    phases: &[f64],
) -> Result<SameSignalMatrix> {
    if n < 64 {
        return Err(Error::invalid(format!("matrix size {n} below minimum 64")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma must be in [0, 1], got {gamma}")));
    }
    if phases.len() != n {
        return Err(Error::invalid(format!(
            "need {n} per-symbol phases, got {}",
            phases.len()
        )));
    }
    let mut data = vec![Complex::new(0.0, 0.0); n * n];
    for k in 0..n {
        let rot = Complex::from_polar(gamma, phases[k]);
        for i in 0..n {
            let mut v = rot * sinc((i as f64 - k as f64) - tau_over_t);
            if i == k {
                v += 1.0;
            }
            data[k * n + i] = v;
        }
    }
    Ok(SameSignalMatrix { data, n, gamma })
}

impl SameSignalMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// trace(H^H H) / n; converges to 1 + gamma^2 as n grows.
    pub fn gram_trace_per_symbol(&self) -> f64 {
        let s: f64 = self.data.iter().map(|v| v.norm_sqr()).sum();
        s / self.n as f64
    }

    /// Largest singular value, by power iteration on H^H H.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.n;
        let mut v = vec![Complex::new(1.0, 0.0); n];
        let mut norm = (n as f64).sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        let mut lambda = 0.0;
        for _ in 0..60 {
            // w = H v, u = H^H w
            let mut w = vec![Complex::new(0.0, 0.0); n];
            for k in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for i in 0..n {
                    acc += self.data[k * n + i] * v[i];
                }
                w[k] = acc;
            }
            let mut u = vec![Complex::new(0.0, 0.0); n];
            for i in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * w[k];
                }
                u[i] = acc;
            }
            norm = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            lambda = norm;
            for x in u.iter_mut() {
                *x /= norm;
            }
            v = u;
        }
        lambda.sqrt()
    }
}

/// Gaussian-input rate of the same-signal channel and the
/// independent-signal bound it cannot exceed ergodically:
/// rate = (1/n) log2 det(I + snr H^H H), bound = log2(1 + (1+gamma^2) snr).
pub fn ergodic_rate_bound(h: &SameSignalMatrix, snr: f64) -> Result<(f64, f64)> {
    if !(snr > 0.0) {
        return Err(Error::invalid("snr must be positive"));
    }
    let n = h.n;
    // A = I + snr H^H H (Hermitian positive definite).
    let mut a = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..n {
                acc += h.data[k * n + i].conj() * h.data[k * n + j];
            }
            let mut v = snr * acc;
            if i == j {
                v += 1.0;
            }
            a[i * n + j] = v;
            a[j * n + i] = v.conj();
        }
    }
    let rate = log2_det_hermitian(&a, n)
        .map_err(|e| Error::numerical(format!("gram factorization failed: {e}")))?
        / n as f64;
    let bound = (1.0 + (1.0 + h.gamma * h.gamma) * snr).log2();
    Ok((rate, bound))
}
