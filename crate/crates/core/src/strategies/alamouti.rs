//! Alamouti block coding over whole signal blocks, with time misalignment.
//!
//! The two satellites first transmit x1 and x2; in the second slot they
//! transmit the conjugated, time-reversed blocks x2*(-t) and -x1*(-t). With
//! perfect knowledge of (gamma, phi, tau) the receiver combines the two
//! slots so that each stream appears on a clean channel with amplitude
//! sqrt(1 + gamma^2), whatever the misalignment tau.

use crate::error::{Error, Result};
use crate::Complex;

/// The two transmission slots of one Alamouti block pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AlamoutiBlockPair {
    /// Satellite 1 and satellite 2 blocks of the first slot: (x1, x2).
    pub first_slot: (Vec<Complex>, Vec<Complex>),
    /// Second slot: (x2*(-t), -x1*(-t)).
    pub second_slot: (Vec<Complex>, Vec<Complex>),
    pub block_length: usize,
}

/// Conjugated time reversal about the block: out[n] = conj(x[L-1-n]).
fn conj_reverse(x: &[Complex]) -> Vec<Complex> {
    x.iter().rev().map(|v| v.conj()).collect()
}

/// Builds the slot pair transmitted by the Alamouti scheme.
pub fn alamouti_precode(x1: &[Complex], x2: &[Complex]) -> Result<AlamoutiBlockPair> {
    if x1.len() != x2.len() || x1.is_empty() {
        return Err(Error::invalid("precode needs equal-length non-empty blocks"));
    }
    let second_a = conj_reverse(x2);
    let second_b: Vec<Complex> = conj_reverse(x1).iter().map(|v| -v).collect();
    Ok(AlamoutiBlockPair {
        first_slot: (x1.to_vec(), x2.to_vec()),
        second_slot: (second_a, second_b),
        block_length: x1.len(),
    })
}

/// Simulates one slot of the misaligned downlink: the second input is
/// delayed by `tau` whole samples and rotated by phi, both blocks are summed
/// with the given noise block (length L + tau; pass zeros for noiseless).
pub fn misaligned_slot(
    s1: &[Complex],
    s2: &[Complex],
    gamma: f64,
    phi: f64,
    tau: usize,
    noise: &[Complex],
) -> Result<Vec<Complex>> {
    if s1.len() != s2.len() {
        return Err(Error::invalid("slot blocks must have equal length"));
    }
    let l = s1.len();
    if noise.len() != l + tau {
        return Err(Error::invalid(format!(
            "noise block must have length L + tau = {}",
            l + tau
        )));
    }
    let rot = Complex::from_polar(gamma, phi);
    let mut y = vec![Complex::new(0.0, 0.0); l + tau];
    for n in 0..l + tau {
        let mut v = noise[n];
        if n < l {
            v += s1[n];
        }
        if n >= tau && n - tau < l {
            v += rot * s2[n - tau];
        }
        y[n] = v;
    }
    Ok(y)
}

/// Validates that a real-valued tau sits on the sample grid and returns it
/// as an integer.
pub fn grid_tau(tau_samples: f64) -> Result<usize> {
    if !(tau_samples >= 0.0) || !tau_samples.is_finite() {
        return Err(Error::invalid("tau must be finite and >= 0"));
    }
    let rounded = tau_samples.round();
    if (tau_samples - rounded).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "tau = {tau_samples} samples is not representable on the sample grid; \
             no resampling is performed"
        )));
    }
    Ok(rounded as usize)
}

/// Combines the two received slots into the per-stream observables.
///
/// `y_a` and `y_b` are the slot-1 and slot-2 received blocks (length
/// L + tau); the receiver knows gamma, phi and tau exactly. Returns
/// (x1_hat, x2_hat), each of length L; in the noiseless linear channel
/// these equal sqrt(1 + gamma^2) * x_i exactly.
pub fn alamouti_decode(
    y_a: &[Complex],
    y_b: &[Complex],
    gamma: f64,
    phi: f64,
    tau_samples: f64,
) -> Result<(Vec<Complex>, Vec<Complex>)> {
    let tau = grid_tau(tau_samples)?;
    if y_a.len() != y_b.len() {
        return Err(Error::invalid("received slots must have equal length"));
    }
    if y_a.len() <= tau {
        return Err(Error::invalid(format!(
            "tau = {tau} leaves no block samples in slots of length {}",
            y_a.len()
        )));
    }
    let l = y_a.len() - tau;
    let scale = 1.0 / (1.0 + gamma * gamma).sqrt();
    let rot_fwd = Complex::from_polar(gamma, phi);
    let rot_bwd = Complex::from_polar(gamma, -phi);
    let mut x1 = Vec::with_capacity(l);
    let mut x2 = Vec::with_capacity(l);
    for n in 0..l {
        let v = y_a[n] - rot_fwd * y_b[l - 1 + tau - n].conj();
        x1.push(v * scale);
    }
    for n in 0..l {
        let v = y_b[l - 1 - n].conj() + rot_bwd * y_a[n + tau];
        x2.push(v * scale);
    }
    Ok((x1, x2))
}

/// Runs precode -> misaligned channel -> decode with explicit noise blocks;
/// exposed for tests and the theorem harness.
pub fn alamouti_round_trip(
    x1: &[Complex],
    x2: &[Complex],
    gamma: f64,
    phi: f64,
    tau: usize,
    noise_a: &[Complex],
    noise_b: &[Complex],
) -> Result<(Vec<Complex>, Vec<Complex>)> {
    let pair = alamouti_precode(x1, x2)?;
    let y_a = misaligned_slot(&pair.first_slot.0, &pair.first_slot.1, gamma, phi, tau, noise_a)?;
    let y_b = misaligned_slot(&pair.second_slot.0, &pair.second_slot.1, gamma, phi, tau, noise_b)?;
    alamouti_decode(&y_a, &y_b, gamma, phi, tau as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_gaussian, seeded_rng};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn zeros(n: usize) -> Vec<Complex> {
        vec![c(0.0, 0.0); n]
    }

    fn random_block(n: usize, rng: &mut impl rand::Rng) -> Vec<Complex> {
        (0..n).map(|_| complex_gaussian(rng, 1.0)).collect()
    }

    #[test]
    fn precode_hand_example() {
        let pair = alamouti_precode(&[c(1.0, 1.0)], &[c(2.0, 0.0)]).unwrap();
        assert_eq!(pair.second_slot.0, vec![c(2.0, 0.0)]);
        assert_eq!(pair.second_slot.1, vec![c(-1.0, 1.0)]);
    }

    #[test]
    fn precode_even_real_block_fixed_point() {
        // A real even-symmetric block is its own conjugate time reversal.
        let x2 = vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)];
        let x1 = vec![c(0.5, 0.0); 3];
        let pair = alamouti_precode(&x1, &x2).unwrap();
        assert_eq!(pair.second_slot.0, x2);
    }

    #[test]
    fn precode_linearity() {
        let mut rng = seeded_rng(11, "precode-lin");
        let x1 = random_block(16, &mut rng);
        let x2 = random_block(16, &mut rng);
        let neg1: Vec<Complex> = x1.iter().map(|v| -v).collect();
        let neg2: Vec<Complex> = x2.iter().map(|v| -v).collect();
        let p = alamouti_precode(&x1, &x2).unwrap();
        let pn = alamouti_precode(&neg1, &neg2).unwrap();
        for (a, b) in p.second_slot.0.iter().zip(&pn.second_slot.0) {
            assert!((a + b).norm() < 1e-15);
        }
        for (a, b) in p.second_slot.1.iter().zip(&pn.second_slot.1) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn noiseless_aligned_recovery() {
        let mut rng = seeded_rng(12, "alam-aligned");
        let x1 = random_block(32, &mut rng);
        let x2 = random_block(32, &mut rng);
        let (h1, h2) =
            alamouti_round_trip(&x1, &x2, 1.0, 0.0, 0, &zeros(32), &zeros(32)).unwrap();
        let g = 2f64.sqrt();
        for (h, x) in h1.iter().zip(&x1).chain(h2.iter().zip(&x2)) {
            assert!((h - g * x).norm() < 1e-12);
        }
    }

    #[test]
    fn noiseless_misaligned_recovery() {
        let mut rng = seeded_rng(13, "alam-delay");
        let x1 = random_block(64, &mut rng);
        let x2 = random_block(64, &mut rng);
        let (gamma, phi, tau) = (0.5, 0.7, 3usize);
        let (h1, h2) =
            alamouti_round_trip(&x1, &x2, gamma, phi, tau, &zeros(64 + tau), &zeros(64 + tau))
                .unwrap();
        let g = 1.25f64.sqrt();
        for (h, x) in h1.iter().zip(&x1).chain(h2.iter().zip(&x2)) {
            assert!((h - g * x).norm() < 1e-12, "residual {}", (h - g * x).norm());
        }
    }

    #[test]
    fn non_grid_tau_rejected() {
        let y = zeros(8);
        assert!(alamouti_decode(&y, &y, 1.0, 0.0, 0.5).is_err());
        assert!(alamouti_decode(&y, &y, 1.0, 0.0, 8.0).is_err());
        assert!(alamouti_decode(&y, &y, 1.0, 0.0, 3.0).is_ok());
    }

    #[test]
    fn post_combining_noise_keeps_power() {
        // Noise-only slots: the combined noise has the same per-sample power
        // as the slot noise, so the per-stream SNR gain is (1 + gamma^2).
        let mut rng = seeded_rng(14, "alam-noise");
        let l = 20_000;
        let gamma = 0.5;
        let na = random_block(l, &mut rng);
        let nb = random_block(l, &mut rng);
        let (h1, _) = alamouti_round_trip(
            &zeros(l),
            &zeros(l),
            gamma,
            0.3,
            0,
            &na,
            &nb,
        )
        .unwrap();
        let p: f64 = h1.iter().map(|v| v.norm_sqr()).sum::<f64>() / l as f64;
        assert!((p - 1.0).abs() < 0.03, "combined noise power {p}");
    }
}
