//! Capacity lower bounds for the peak-power-constrained AWGN channel.
//!
//! Under a peak constraint `|x|^2 <= P` the capacity-achieving input is
//! discrete in amplitude and uniform in phase: a set of concentric rings
//! with optimized radii and probabilities. This module evaluates the ring
//! output density, single- and two-transmitter information rates (by polar
//! Gauss-Legendre quadrature or Monte Carlo), the ring-count/radius
//! optimizer, and the resulting rate regions.
//!
//! Noise power is normalized to N = 1 internally; a distribution with peak
//! power P is rescaled so that its peak matches the requested P/N.

mod bessel;
mod density;
mod ir;
mod optimize;

pub use bessel::ln_i0;
pub use density::{log_output_density_radial, ring_output_density};
pub use ir::{
    peak_region, single_tx_ir, two_tx_conditional_ir, two_tx_joint_ir, IrEstimate,
};
pub use optimize::{optimal_ring_count, optimize_rings, optimize_two_ring_joint, OptimizedRings};

use crate::error::{Error, Result};

/// Discrete-amplitude, uniform-phase input law: `m` rings with radii
/// `p_l <= sqrt(P)` (strictly increasing) and probabilities summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct RingDistribution {
    radii: Vec<f64>,
    weights: Vec<f64>,
    peak_power: f64,
}

impl RingDistribution {
    pub fn new(radii: Vec<f64>, weights: Vec<f64>, peak_power: f64) -> Result<Self> {
        if !(peak_power > 0.0) {
            return Err(Error::invalid("peak_power must be positive"));
        }
        if radii.is_empty() || radii.len() != weights.len() {
            return Err(Error::invalid("radii and weights must be non-empty and equal length"));
        }
        let sqrt_p = peak_power.sqrt();
        for (i, &r) in radii.iter().enumerate() {
            if !(0.0..=sqrt_p * (1.0 + 1e-12)).contains(&r) {
                return Err(Error::invalid(format!(
                    "radius {r} outside [0, sqrt(P) = {sqrt_p}]"
                )));
            }
            if i > 0 && r <= radii[i - 1] {
                return Err(Error::invalid("radii must be strictly increasing"));
            }
        }
        let mut sum = 0.0;
        for &q in &weights {
            if !(0.0..=1.0 + 1e-12).contains(&q) {
                return Err(Error::invalid(format!("weight {q} outside [0, 1]")));
            }
            sum += q;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("weights sum to {sum}, expected 1")));
        }
        Ok(RingDistribution {
            radii,
            weights,
            peak_power,
        })
    }

    /// Single ring at the peak amplitude (constant envelope).
    pub fn single_ring(peak_power: f64) -> Result<Self> {
        RingDistribution::new(vec![peak_power.sqrt()], vec![1.0], peak_power)
    }

    /// Degenerate all-power-at-zero input (a silent transmitter).
    pub fn silent() -> Self {
        RingDistribution {
            radii: vec![0.0],
            weights: vec![1.0],
            peak_power: 1.0,
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn peak_power(&self) -> f64 {
        self.peak_power
    }

    pub fn ring_count(&self) -> usize {
        self.radii.len()
    }

    /// Radii rescaled so the peak amplitude budget becomes `sqrt(new_peak)`.
    pub(crate) fn radii_scaled_to(&self, new_peak: f64) -> Vec<f64> {
        let s = (new_peak / self.peak_power).sqrt();
        self.radii.iter().map(|&r| r * s).collect()
    }
}

/// How the expectation integrals of the information rates are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadMethod {
    /// Deterministic polar Gauss-Legendre quadrature.
    GaussLegendrePolar,
    /// Monte Carlo with standard-error reporting.
    MonteCarlo,
}

/// Numerical-evaluation parameters shared by the peak-power operations.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub mc_samples: usize,
    /// Accuracy target in bits; Monte Carlo runs fail when the standard
    /// error exceeds it.
    pub tolerance: f64,
    /// Seed for the Monte Carlo path; quadrature ignores it.
    pub seed: u64,
}

impl QuadratureSpec {
    pub fn validated(self) -> Result<Self> {
        if self.radial_nodes < 8 || self.angular_nodes < 8 {
            return Err(Error::invalid("quadrature node counts must be >= 8"));
        }
        if self.mc_samples < 10_000 {
            return Err(Error::invalid("mc_samples must be >= 10^4"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        Ok(self)
    }

    pub fn quadrature() -> Self {
        QuadratureSpec {
            method: QuadMethod::GaussLegendrePolar,
            radial_nodes: 320,
            angular_nodes: 96,
            mc_samples: 100_000,
            tolerance: 5e-3,
            seed: 0,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec {
            method: QuadMethod::MonteCarlo,
            radial_nodes: 320,
            angular_nodes: 96,
            mc_samples: samples,
            tolerance: 5e-3,
            seed,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::quadrature()
    }
}
