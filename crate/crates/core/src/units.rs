//! dB and linear-scale conversions.
//!
//! All internal math works on linear power ratios and linear amplitudes.
//! The dB convention follows the figures of the satellite literature: power
//! unbalance is quoted as gamma^2 in dB, SNR as P/N (or P_sat/N) in dB.

/// Converts a dB power ratio to a linear power ratio, `10^(x/10)`.
pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// Converts a linear power ratio to dB, `10 log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Converts a power unbalance gamma^2 in dB to the linear amplitude factor gamma.
pub fn gamma_from_db_sq(gamma_db_sq: f64) -> f64 {
    db_to_linear(gamma_db_sq).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_db_is_unity() {
        assert_eq!(db_to_linear(0.0), 1.0);
    }

    #[test]
    fn ten_db_is_ten() {
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn minus_six_db_gamma_sq_gives_half_gamma() {
        // gamma^2 = -6 dB is the strongly unbalanced case, gamma = 1/2.
        let g2 = db_to_linear(-6.0206);
        assert!((g2 - 0.25).abs() < 1e-4);
        assert!((gamma_from_db_sq(-6.0206) - 0.5).abs() < 1e-4);
    }

    #[test]
    fn round_trip() {
        for e in -24..=24 {
            let x = 10f64.powf(e as f64 / 4.0);
            let rel = (db_to_linear(linear_to_db(x)) - x).abs() / x;
            assert!(rel < 1e-12, "round trip failed at {x}: rel {rel}");
        }
    }
}
