//! Multiple-access rate region bookkeeping.
//!
//! A two-transmitter region is the pentagon
//! `{ R1 <= I1, R2 <= I2, R1 + R2 <= IJ }`. Broadcasting forces both
//! satellites onto the equal-rate line, so the operating point is E with
//! pragmatic sum rate `min(IJ, 2 I2)`; when that falls below the
//! single-transmitter rate I1 the second satellite is not worth activating.

use crate::error::{Error, Result};

/// A rate pair (R1, R2) in bits/s/Hz.
pub type RatePair = (f64, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    /// I(x1; y | x2): best rate of the unattenuated satellite.
    pub i1: f64,
    /// I(x2; y | x1): best rate of the attenuated satellite.
    pub i2: f64,
    /// I(x1, x2; y): sum-rate bound.
    pub i_joint: f64,
    /// (0, I2).
    pub a: RatePair,
    /// (IJ - I2, I2): left end of the sum-rate face.
    pub b: RatePair,
    /// (I1, IJ - I1): right end of the sum-rate face.
    pub c: RatePair,
    /// (I1, 0).
    pub d: RatePair,
    /// Equal-rate operating point (p/2, p/2), p = min(IJ, 2 I2).
    pub e: RatePair,
    /// Boundary point with sum rate exactly I1, on the line R2 = -R1 + I1.
    pub f: RatePair,
    /// min(IJ, 2 I2): the sum rate actually usable when broadcasting.
    pub pragmatic: f64,
    /// True when a single satellite at rate I1 beats the pragmatic point.
    pub single_better: bool,
}

/// Builds the region from its rate triple. Small numerical inconsistencies
/// (within `tol`) are clamped; anything larger is rejected.
pub fn assemble_region_with_tol(i1: f64, i2: f64, i_joint: f64, tol: f64) -> Result<RateRegion> {
    if i1 < 0.0 || i2 < 0.0 || i_joint < 0.0 {
        return Err(Error::InconsistentRates(format!(
            "negative rate in triple ({i1}, {i2}, {i_joint})"
        )));
    }
    if i2 > i1 + tol {
        return Err(Error::InconsistentRates(format!(
            "i2 {i2} exceeds i1 {i1}; satellite 2 is the attenuated one"
        )));
    }
    if i_joint > i1 + i2 + tol {
        return Err(Error::InconsistentRates(format!(
            "i_joint {i_joint} exceeds i1 + i2 = {}",
            i1 + i2
        )));
    }
    if i_joint + tol < i1.max(i2) {
        return Err(Error::InconsistentRates(format!(
            "i_joint {i_joint} below max(i1, i2) = {}",
            i1.max(i2)
        )));
    }
    let i2 = i2.min(i1);
    let i_joint = i_joint.clamp(i1.max(i2), i1 + i2);

    let pragmatic = i_joint.min(2.0 * i2);
    let region = RateRegion {
        i1,
        i2,
        i_joint,
        a: (0.0, i2),
        b: (i_joint - i2, i2),
        c: (i1, i_joint - i1),
        d: (i1, 0.0),
        e: (pragmatic / 2.0, pragmatic / 2.0),
        f: (i1 - i2, i2),
        pragmatic,
        single_better: pragmatic < i1,
    };
    Ok(region)
}

/// [`assemble_region_with_tol`] with a tolerance suited to closed-form and
/// quadrature-grade inputs.
pub fn assemble_region(i1: f64, i2: f64, i_joint: f64) -> Result<RateRegion> {
    assemble_region_with_tol(i1, i2, i_joint, 1e-9)
}

impl RateRegion {
    /// True when (r1, r2) lies inside or on the pentagon (within `tol`).
    pub fn contains(&self, point: RatePair, tol: f64) -> bool {
        let (r1, r2) = point;
        r1 >= -tol
            && r2 >= -tol
            && r1 <= self.i1 + tol
            && r2 <= self.i2 + tol
            && r1 + r2 <= self.i_joint + tol
    }

    /// Vertices of the boundary polygon in order D, C, B, A.
    pub fn boundary(&self) -> Vec<RatePair> {
        vec![self.d, self.c, self.b, self.a]
    }
}
