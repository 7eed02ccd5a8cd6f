//! Closed-form spectral efficiencies for the average-power AWGN model.
//!
//! With Gaussian inputs and average power P per satellite, every strategy
//! has an exact expression; these are the reference curves against which the
//! peak-power and transponder results are compared. `snr` is the linear
//! P/N; `gamma` is the linear amplitude unbalance (gamma = 0 gives the
//! single-satellite reference).

use crate::error::{Error, Result};
use crate::region::{assemble_region, RateRegion};

fn check(snr: f64, gamma: f64) -> Result<()> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::invalid(format!("snr must be positive, got {snr}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma must be in [0, 1], got {gamma}")));
    }
    Ok(())
}

/// Sum-rate with overlapped signals and joint decoding:
/// `log2(1 + (1 + gamma^2) P/N)`.
pub fn awgn_joint(snr: f64, gamma: f64) -> Result<f64> {
    check(snr, gamma)?;
    Ok((1.0 + (1.0 + gamma * gamma) * snr).log2())
}

/// FDM rate, the average of two half-band subchannels:
/// `1/2 log2(1 + 2 P/N) + 1/2 log2(1 + 2 gamma^2 P/N)`.
pub fn awgn_fdm(snr: f64, gamma: f64) -> Result<f64> {
    check(snr, gamma)?;
    Ok(0.5 * (1.0 + 2.0 * snr).log2() + 0.5 * (1.0 + 2.0 * gamma * gamma * snr).log2())
}

/// Which side of the `min` is active in a pragmatic rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PragmaticBranch {
    /// The sum-rate bound I_J limits the equal-rate point.
    SumRate,
    /// Twice the weak-satellite rate (2 I2) limits it.
    EqualRate,
}

/// A pragmatic rate together with its active branch, so the slope change of
/// the equal-rate curves is directly observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PragmaticRate {
    pub bits: f64,
    pub branch: PragmaticBranch,
}

/// Equal-rate sum rate for overlapped signals:
/// `min(I_J, 2 log2(1 + gamma^2 P/N))`.
pub fn awgn_joint_pragmatic(snr: f64, gamma: f64) -> Result<PragmaticRate> {
    let i_joint = awgn_joint(snr, gamma)?;
    let two_i2 = 2.0 * (1.0 + gamma * gamma * snr).log2();
    Ok(if two_i2 < i_joint {
        PragmaticRate {
            bits: two_i2,
            branch: PragmaticBranch::EqualRate,
        }
    } else {
        PragmaticRate {
            bits: i_joint,
            branch: PragmaticBranch::SumRate,
        }
    })
}

/// Equal-rate FDM rate: `log2(1 + 2 gamma^2 P/N)`.
pub fn awgn_fdm_pragmatic(snr: f64, gamma: f64) -> Result<f64> {
    check(snr, gamma)?;
    Ok((1.0 + 2.0 * gamma * gamma * snr).log2())
}

/// Alamouti rate. The combined observable is an AWGN channel with SNR
/// `(1 + gamma^2) P/N`, so with Gaussian inputs this equals [`awgn_joint`]
/// for every (snr, gamma).
pub fn awgn_alamouti(snr: f64, gamma: f64) -> Result<f64> {
    check(snr, gamma)?;
    Ok((1.0 + (1.0 + gamma * gamma) * snr).log2())
}

/// Single-satellite reference `log2(1 + P/N)`.
pub fn awgn_single(snr: f64) -> Result<f64> {
    check(snr, 0.0)?;
    Ok((1.0 + snr).log2())
}

/// All strategy rates at one (snr, gamma) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnRates {
    pub i_joint: f64,
    pub i_fdm: f64,
    pub i_joint_pragmatic: f64,
    pub i_fdm_pragmatic: f64,
    pub i_alamouti: f64,
    pub i_single: f64,
}

pub fn awgn_rates(snr: f64, gamma: f64) -> Result<AwgnRates> {
    Ok(AwgnRates {
        i_joint: awgn_joint(snr, gamma)?,
        i_fdm: awgn_fdm(snr, gamma)?,
        i_joint_pragmatic: awgn_joint_pragmatic(snr, gamma)?.bits,
        i_fdm_pragmatic: awgn_fdm_pragmatic(snr, gamma)?,
        i_alamouti: awgn_alamouti(snr, gamma)?,
        i_single: awgn_single(snr)?,
    })
}

/// Gaussian-input rate region: I1 = log2(1 + P/N), I2 = log2(1 + gamma^2 P/N),
/// IJ = log2(1 + (1 + gamma^2) P/N), with the derived corner and pragmatic
/// points.
pub fn awgn_region(snr: f64, gamma: f64) -> Result<RateRegion> {
    check(snr, gamma)?;
    let i1 = (1.0 + snr).log2();
    let i2 = (1.0 + gamma * gamma * snr).log2();
    let i_joint = (1.0 + (1.0 + gamma * gamma) * snr).log2();
    assemble_region(i1, i2, i_joint)
}
