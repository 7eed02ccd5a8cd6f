//! High-power amplifier models: Saleh-form TWTA and measured lookup tables.

use crate::error::{Error, Result};
use crate::Complex;

/// Memoryless AM/AM + AM/PM nonlinearity.
#[derive(Debug, Clone, PartialEq)]
pub enum HpaSpec {
    /// AM/AM = a r / (1 + b r^2), AM/PM = c r^2 / (1 + d r^2) [rad].
    Saleh {
        alpha_a: f64,
        beta_a: f64,
        alpha_phi: f64,
        beta_phi: f64,
    },
    /// Sampled characteristic relative to saturation; rows are
    /// (input_db, output_db, phase_deg), strictly increasing in input_db.
    Table { rows: Vec<(f64, f64, f64)> },
}

impl HpaSpec {
    pub fn saleh(alpha_a: f64, beta_a: f64, alpha_phi: f64, beta_phi: f64) -> Result<Self> {
        if !(alpha_a > 0.0 && beta_a > 0.0) {
            return Err(Error::invalid("Saleh AM/AM parameters must be positive"));
        }
        if !(alpha_phi >= 0.0 && beta_phi >= 0.0) {
            return Err(Error::invalid("Saleh AM/PM parameters must be >= 0"));
        }
        Ok(HpaSpec::Saleh {
            alpha_a,
            beta_a,
            alpha_phi,
            beta_phi,
        })
    }

    pub fn table(rows: Vec<(f64, f64, f64)>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::invalid("HPA table needs at least two rows"));
        }
        for w in rows.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::invalid("HPA table input_db must be strictly increasing"));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::invalid("HPA table AM/AM must be monotone up to saturation"));
            }
        }
        Ok(HpaSpec::Table { rows })
    }

    /// Input amplitude at saturation (peak of the AM/AM curve).
    pub fn input_saturation_amplitude(&self) -> f64 {
        match self {
            HpaSpec::Saleh { beta_a, .. } => 1.0 / beta_a.sqrt(),
            // Table rows are relative to saturation: input_db = 0 there.
            HpaSpec::Table { .. } => 1.0,
        }
    }

    /// Output power at saturation.
    pub fn output_saturation_power(&self) -> f64 {
        match self {
            HpaSpec::Saleh { alpha_a, beta_a, .. } => {
                let a = alpha_a / (2.0 * beta_a.sqrt());
                a * a
            }
            HpaSpec::Table { .. } => 1.0,
        }
    }

    /// AM/AM: input amplitude to output amplitude.
    pub fn am_am(&self, r: f64) -> Result<f64> {
        match self {
            HpaSpec::Saleh { alpha_a, beta_a, .. } => Ok(alpha_a * r / (1.0 + beta_a * r * r)),
            HpaSpec::Table { rows } => {
                let (out_db, _) = table_lookup(rows, r)?;
                Ok(10f64.powf(out_db / 20.0))
            }
        }
    }

    /// AM/PM: input amplitude to phase shift in radians.
    pub fn am_pm(&self, r: f64) -> Result<f64> {
        match self {
            HpaSpec::Saleh {
                alpha_phi,
                beta_phi,
                ..
            } => Ok(alpha_phi * r * r / (1.0 + beta_phi * r * r)),
            HpaSpec::Table { rows } => {
                let (_, phase_deg) = table_lookup(rows, r)?;
                Ok(phase_deg.to_radians())
            }
        }
    }

    /// Applies the nonlinearity to one sample.
    pub fn apply(&self, x: Complex) -> Result<Complex> {
        let r = x.norm();
        if r < 1e-300 {
            return Ok(Complex::new(0.0, 0.0));
        }
        let g = self.am_am(r)?;
        let dphi = self.am_pm(r)?;
        Ok(Complex::from_polar(g, x.arg() + dphi))
    }
}

/// Interpolates (output_db, phase_deg) at input amplitude `r`. Drive below
/// the first row extrapolates the small-signal gain linearly; drive beyond
/// the last row is an error (no extrapolation past the measured range).
fn table_lookup(rows: &[(f64, f64, f64)], r: f64) -> Result<(f64, f64)> {
    let in_db = 20.0 * r.log10();
    let first = rows[0];
    let last = rows[rows.len() - 1];
    if in_db > last.0 + 1e-12 {
        return Err(Error::invalid(format!(
            "HPA drive {in_db:.2} dB beyond the last table sample {:.2} dB",
            last.0
        )));
    }
    if in_db <= first.0 {
        // Small-signal region: constant gain from the first row.
        return Ok((first.1 + (in_db - first.0), first.2));
    }
    for w in rows.windows(2) {
        if in_db <= w[1].0 {
            let t = (in_db - w[0].0) / (w[1].0 - w[0].0);
            return Ok((w[0].1 + t * (w[1].1 - w[0].1), w[0].2 + t * (w[1].2 - w[0].2)));
        }
    }
    Ok((last.1, last.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn saleh() -> HpaSpec {
        HpaSpec::saleh(2.1587, 1.1517, 4.0033, 9.1040).unwrap()
    }

    #[test]
    fn saleh_small_signal_linear() {
        let h = saleh();
        let g = h.am_am(0.01).unwrap();
        assert!((g - 2.1587 * 0.01).abs() < 1e-4);
        assert!(h.am_pm(0.01).unwrap() < 1e-3);
    }

    #[test]
    fn saleh_saturation_point() {
        let h = saleh();
        let r_sat = h.input_saturation_amplitude();
        // AM/AM peaks at r_sat: derivative changes sign.
        let g_lo = h.am_am(r_sat * 0.99).unwrap();
        let g_sat = h.am_am(r_sat).unwrap();
        let g_hi = h.am_am(r_sat * 1.01).unwrap();
        assert!(g_sat >= g_lo && g_sat >= g_hi);
        assert!((g_sat * g_sat - h.output_saturation_power()).abs() < 1e-12);
        // Monotone up to saturation.
        let mut last = 0.0;
        for k in 1..=100 {
            let g = h.am_am(r_sat * k as f64 / 100.0).unwrap();
            assert!(g >= last);
            last = g;
        }
    }

    #[test]
    fn constant_envelope_in_constant_envelope_out() {
        let h = saleh();
        let r = 0.5;
        let phase_shift = h.am_pm(r).unwrap();
        for k in 0..8 {
            let x = Complex::from_polar(r, k as f64);
            let y = h.apply(x).unwrap();
            assert!((y.norm() - h.am_am(r).unwrap()).abs() < 1e-12);
            let dphi = (y.arg() - x.arg() - phase_shift).rem_euclid(std::f64::consts::TAU);
            assert!(dphi < 1e-9 || (std::f64::consts::TAU - dphi) < 1e-9);
        }
    }

    #[test]
    fn table_interpolates_and_refuses_extrapolation() {
        let rows = vec![(-20.0, -19.0, 0.0), (-10.0, -9.3, 3.0), (0.0, -0.2, 12.0), (3.0, 0.0, 17.0)];
        let h = HpaSpec::table(rows).unwrap();
        // In range: interpolated.
        let g = h.am_am(1.0).unwrap(); // 0 dB input
        assert!((20.0 * g.log10() + 0.2).abs() < 1e-9);
        // Below range: small-signal gain extension.
        assert!(h.am_am(0.01).unwrap() > 0.0);
        // Beyond range: error, no extrapolation.
        assert!(h.am_am(2.0).is_err());
    }

    #[test]
    fn non_monotone_table_rejected() {
        let rows = vec![(-10.0, -9.0, 0.0), (0.0, -10.0, 0.0)];
        assert!(HpaSpec::table(rows).is_err());
    }
}
