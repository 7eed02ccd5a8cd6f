//! Adaptive receiver and simulation-based information rates: oversampled
//! front end, fractionally-spaced MMSE equalizer (LMS/RLS), joint APP
//! symbol detector, and the auxiliary-channel Monte Carlo rate estimator.
//!
//! Rates measured here are lower bounds achievable with this receiver: the
//! detector assumes a memoryless Gaussian law at the equalizer output, so
//! residual ISI and nonlinear distortion count as noise.

mod app;
mod chain;
mod equalizer;
mod ir;

pub use app::{multiuser_app_log_weight, multiuser_posterior};
pub use chain::{default_ibo_db, run_strategy_chain, Scenario, StrategyOutcome, RUN_RECORD_HEADER};
pub use equalizer::{apply_equalizer_taps, batch_wiener, front_end, fs_mmse_equalize, EqualizerOutput};
pub use ir::{mc_ir_estimate, DetectorSequence, IrMode, McIrResult};

use crate::error::{Error, Result};
use crate::Complex;

/// Equalizer adaptation algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adaptation {
    Lms,
    Rls,
}

/// Fractionally-spaced MMSE equalizer parameters.
#[derive(Debug, Clone, Copy)]
pub struct EqualizerSpec {
    /// Number of T/2-spaced taps; odd.
    pub taps: usize,
    pub algorithm: Adaptation,
    /// LMS step size, or RLS forgetting factor.
    pub step_or_forgetting: f64,
    pub training_symbols: usize,
    /// Keep adapting on sliced decisions after training.
    pub decision_directed: bool,
}

impl EqualizerSpec {
    pub fn validated(self) -> Result<Self> {
        if self.taps % 2 == 0 || self.taps == 0 {
            return Err(Error::invalid("equalizer taps must be odd"));
        }
        match self.algorithm {
            Adaptation::Lms => {
                if !(self.step_or_forgetting > 0.0 && self.step_or_forgetting <= 0.1) {
                    return Err(Error::invalid("LMS step must be in (0, 0.1]"));
                }
            }
            Adaptation::Rls => {
                if !(self.step_or_forgetting > 0.9 && self.step_or_forgetting <= 1.0) {
                    return Err(Error::invalid("RLS forgetting must be in (0.9, 1]"));
                }
            }
        }
        if self.training_symbols < 10 * self.taps {
            return Err(Error::invalid(format!(
                "training length {} below 10x taps {}",
                self.training_symbols, self.taps
            )));
        }
        Ok(self)
    }

    pub fn rls_default() -> Self {
        EqualizerSpec {
            taps: 31,
            algorithm: Adaptation::Rls,
            step_or_forgetting: 0.999,
            training_symbols: 2000,
            decision_directed: true,
        }
    }

    pub fn lms_default() -> Self {
        EqualizerSpec {
            taps: 31,
            algorithm: Adaptation::Lms,
            step_or_forgetting: 5e-4,
            training_symbols: 2000,
            decision_directed: true,
        }
    }
}

/// Per-symbol detector context: equalizer bias, unbalance, known phase, and
/// the auxiliary noise power.
#[derive(Debug, Clone, Copy)]
pub struct DetectorContext {
    pub beta: Complex,
    pub gamma: f64,
    pub phi_k: f64,
    pub n0: f64,
}

impl DetectorContext {
    pub fn validated(self) -> Result<Self> {
        if !(self.n0 > 0.0) {
            return Err(Error::invalid("detector n0 must be positive"));
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_invariants() {
        assert!(EqualizerSpec::rls_default().validated().is_ok());
        let mut s = EqualizerSpec::rls_default();
        s.taps = 30;
        assert!(s.validated().is_err());
        let mut s = EqualizerSpec::lms_default();
        s.step_or_forgetting = 0.5;
        assert!(s.validated().is_err());
        let mut s = EqualizerSpec::rls_default();
        s.step_or_forgetting = 0.5;
        assert!(s.validated().is_err());
        let mut s = EqualizerSpec::rls_default();
        s.training_symbols = 100;
        assert!(s.validated().is_err());
    }
}
