//! Output density of the AWGN channel driven by a ring distribution.

use super::bessel::ln_i0;
use super::RingDistribution;
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;
use crate::Complex;

/// ln p(y) as a function of rho = |y| for given ring radii/weights and noise
/// power `n0`; the density is circularly symmetric.
///
/// p(y) = (1/(pi N)) sum_l q_l exp(-(rho^2 + p_l^2)/N) I0(2 rho p_l / N)
pub fn log_output_density_radial(rho: f64, radii: &[f64], weights: &[f64], n0: f64) -> f64 {
    debug_assert!(rho >= 0.0 && n0 > 0.0);
    let mut terms = Vec::with_capacity(radii.len());
    for (&p, &q) in radii.iter().zip(weights) {
        if q <= 0.0 {
            continue;
        }
        let ln_term = q.ln() - (rho * rho + p * p) / n0 + ln_i0(2.0 * rho * p / n0);
        terms.push(ln_term);
    }
    log_sum_exp(&terms) - (std::f64::consts::PI * n0).ln()
}

/// Probability density of the observable `y` for a peak-power input with the
/// given ring law and noise power `n0`.
pub fn ring_output_density(y: Complex, rings: &RingDistribution, n0: f64) -> Result<f64> {
    if !(n0 > 0.0) {
        return Err(Error::invalid("noise power must be positive"));
    }
    Ok(log_output_density_radial(y.norm(), rings.radii(), rings.weights(), n0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gauss_legendre_on;

    #[test]
    fn zero_radius_ring_is_pure_noise() {
        let rings = RingDistribution::new(vec![0.0], vec![1.0], 1.0).unwrap();
        let n0 = 0.7;
        for &(re, im) in &[(0.0, 0.0), (0.5, -0.2), (1.5, 2.0)] {
            let y = Complex::new(re, im);
            let expect = (-(y.norm_sqr()) / n0).exp() / (std::f64::consts::PI * n0);
            let got = ring_output_density(y, &rings, n0).unwrap();
            assert!((got - expect).abs() < 1e-15 * expect.max(1e-300));
        }
    }

    #[test]
    fn unit_ring_at_origin() {
        // p(0) = (1/pi) e^{-1} I0(0) = e^{-1}/pi.
        let rings = RingDistribution::new(vec![1.0], vec![1.0], 1.0).unwrap();
        let got = ring_output_density(Complex::new(0.0, 0.0), &rings, 1.0).unwrap();
        let expect = (-1.0f64).exp() / std::f64::consts::PI;
        assert!((got - expect).abs() < 1e-12);
        assert!((expect - 0.11709).abs() < 1e-5);
    }

    #[test]
    fn density_normalizes_radially() {
        // 2 pi int rho p(rho) drho = 1 for a two-ring law.
        let rings = RingDistribution::new(vec![0.5, 1.0], vec![0.3, 0.7], 1.0).unwrap();
        let n0: f64 = 0.2;
        let (x, w) = gauss_legendre_on(2000, 0.0, 1.0 + 10.0 * n0.sqrt());
        let mut s = 0.0;
        for (&rho, &wi) in x.iter().zip(&w) {
            let lp = log_output_density_radial(rho, rings.radii(), rings.weights(), n0);
            s += wi * 2.0 * std::f64::consts::PI * rho * lp.exp();
        }
        assert!((s - 1.0).abs() < 1e-9, "normalization {s}");
    }

    #[test]
    fn no_overflow_at_high_snr() {
        // Peak amplitude 10^3, tiny noise: exponent arguments are ~1e6 and
        // must be tamed by the log-domain Bessel.
        let rings = RingDistribution::new(vec![1e3], vec![1.0], 1e6).unwrap();
        let v = ring_output_density(Complex::new(1e3, 0.0), &rings, 1e-2).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }
}
