//! Link-level configuration shared by every channel model.

use crate::error::{Error, Result};

/// Default ceiling on the phase-noise random-walk step, in radians per
/// symbol. Keeps realizations slow with respect to the baud rate.
pub const PHASE_STEP_CEILING: f64 = 0.01;

/// Phase-noise evolution law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseNoiseModel {
    /// Constant phase offset between the two oscillators.
    Constant,
    /// Per-symbol Gaussian random walk.
    RandomWalk,
}

/// Oscillator phase-noise description for the second satellite path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseSpec {
    pub model: PhaseNoiseModel,
    pub initial_phase: f64,
    /// Random-walk step standard deviation, radians per symbol.
    pub step_std: f64,
}

impl PhaseNoiseSpec {
    pub fn constant(phase: f64) -> Self {
        PhaseNoiseSpec {
            model: PhaseNoiseModel::Constant,
            initial_phase: phase,
            step_std: 0.0,
        }
    }

    pub fn random_walk(initial_phase: f64, step_std: f64) -> Result<Self> {
        Self::random_walk_with_ceiling(initial_phase, step_std, PHASE_STEP_CEILING)
    }

    /// Random walk with an explicit slow-variation ceiling on the step.
    pub fn random_walk_with_ceiling(initial_phase: f64, step_std: f64, ceiling: f64) -> Result<Self> {
        if !(step_std >= 0.0) {
            return Err(Error::invalid("phase-noise step_std must be >= 0"));
        }
        if step_std > ceiling {
            return Err(Error::invalid(format!(
                "phase-noise step_std {step_std} exceeds slow-variation ceiling {ceiling} rad/symbol"
            )));
        }
        Ok(PhaseNoiseSpec {
            model: PhaseNoiseModel::RandomWalk,
            initial_phase,
            step_std,
        })
    }

    /// Realizes per-symbol phases for `n` symbols.
    pub fn realize(&self, n: usize, rng: &mut impl rand::Rng) -> Vec<f64> {
        use rand_distr::StandardNormal;
        match self.model {
            PhaseNoiseModel::Constant => vec![self.initial_phase; n],
            PhaseNoiseModel::RandomWalk => {
                let mut phi = self.initial_phase;
                (0..n)
                    .map(|_| {
                        let out = phi;
                        let step: f64 = rng.sample(StandardNormal);
                        phi += self.step_std * step;
                        out
                    })
                    .collect()
            }
        }
    }
}

impl Default for PhaseNoiseSpec {
    fn default() -> Self {
        PhaseNoiseSpec::constant(0.0)
    }
}

/// Parameters of one two-satellite downlink scenario.
///
/// `gamma` is the linear amplitude unbalance of the second (attenuated)
/// satellite; the figures of the literature quote gamma^2 in dB, converted at
/// the interface boundary. The single-satellite reference (gamma -> 0) is
/// only reachable through [`LinkConfig::single_satellite`].
#[derive(Debug, Clone)]
pub struct LinkConfig {
    pub snr_db: f64,
    pub gamma: f64,
    pub tau_samples: f64,
    pub phase_noise: PhaseNoiseSpec,
    pub seed: u64,
}

impl LinkConfig {
    /// Two-satellite link; requires 1/2 <= gamma <= 1.
    pub fn new(snr_db: f64, gamma: f64, seed: u64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::invalid("snr_db must be finite"));
        }
        if !(0.5..=1.0).contains(&gamma) {
            return Err(Error::invalid(format!(
                "gamma {gamma} outside [0.5, 1]; use single_satellite() for the one-satellite reference"
            )));
        }
        Ok(LinkConfig {
            snr_db,
            gamma,
            tau_samples: 0.0,
            phase_noise: PhaseNoiseSpec::default(),
            seed,
        })
    }

    /// Single-satellite reference link (gamma = 0).
    pub fn single_satellite(snr_db: f64, seed: u64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::invalid("snr_db must be finite"));
        }
        Ok(LinkConfig {
            snr_db,
            gamma: 0.0,
            tau_samples: 0.0,
            phase_noise: PhaseNoiseSpec::default(),
            seed,
        })
    }

    pub fn with_tau(mut self, tau_samples: f64) -> Result<Self> {
        if !(tau_samples >= 0.0) {
            return Err(Error::invalid("tau_samples must be >= 0"));
        }
        self.tau_samples = tau_samples;
        Ok(self)
    }

    pub fn with_phase_noise(mut self, spec: PhaseNoiseSpec) -> Self {
        self.phase_noise = spec;
        self
    }

    pub fn snr_linear(&self) -> f64 {
        crate::units::db_to_linear(self.snr_db)
    }
}

/// Transmission strategy label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Joint,
    JointPragmatic,
    Fdm,
    FdmPragmatic,
    Alamouti,
    Single,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Joint => "joint",
            Strategy::JointPragmatic => "joint-pragmatic",
            Strategy::Fdm => "fdm",
            Strategy::FdmPragmatic => "fdm-pragmatic",
            Strategy::Alamouti => "alamouti",
            Strategy::Single => "single",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "joint" => Ok(Strategy::Joint),
            "joint-pragmatic" => Ok(Strategy::JointPragmatic),
            "fdm" => Ok(Strategy::Fdm),
            "fdm-pragmatic" => Ok(Strategy::FdmPragmatic),
            "alamouti" => Ok(Strategy::Alamouti),
            "single" => Ok(Strategy::Single),
            other => Err(Error::invalid(format!("unknown strategy `{other}`"))),
        }
    }

    pub const ALL: [Strategy; 6] = [
        Strategy::Joint,
        Strategy::JointPragmatic,
        Strategy::Fdm,
        Strategy::FdmPragmatic,
        Strategy::Alamouti,
        Strategy::Single,
    ];
}

/// One (SNR, spectral efficiency) sample. Rates are bits/s/Hz under the
/// TW = 1 normalization, so information rate and spectral efficiency agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub snr_db: f64,
    pub rate_bits: f64,
}

impl RatePoint {
    pub fn new(snr_db: f64, rate_bits: f64) -> Result<Self> {
        if rate_bits < 0.0 {
            return Err(Error::invalid(format!("negative rate {rate_bits}")));
        }
        Ok(RatePoint { snr_db, rate_bits })
    }
}

/// A labeled rate-vs-SNR curve with strictly increasing SNR grid.
#[derive(Debug, Clone)]
pub struct RateCurve {
    pub strategy: Strategy,
    pub points: Vec<RatePoint>,
    pub label: String,
}

impl RateCurve {
    pub fn new(strategy: Strategy, points: Vec<RatePoint>, label: impl Into<String>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].snr_db <= w[0].snr_db {
                return Err(Error::invalid(format!(
                    "rate curve SNR grid not strictly increasing at {} dB",
                    w[1].snr_db
                )));
            }
        }
        Ok(RateCurve {
            strategy,
            points,
            label: label.into(),
        })
    }

    pub fn snr_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.snr_db).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_bounds_enforced() {
        assert!(LinkConfig::new(10.0, 0.49, 1).is_err());
        assert!(LinkConfig::new(10.0, 1.01, 1).is_err());
        assert!(LinkConfig::new(10.0, 0.5, 1).is_ok());
        assert!(LinkConfig::new(f64::NAN, 1.0, 1).is_err());
    }

    #[test]
    fn single_satellite_constructor_allows_gamma_zero() {
        let cfg = LinkConfig::single_satellite(10.0, 1).unwrap();
        assert_eq!(cfg.gamma, 0.0);
    }

    #[test]
    fn phase_noise_ceiling() {
        assert!(PhaseNoiseSpec::random_walk(0.0, 0.02).is_err());
        assert!(PhaseNoiseSpec::random_walk(0.0, 1e-3).is_ok());
    }

    #[test]
    fn curve_requires_increasing_grid() {
        let pts = vec![
            RatePoint::new(0.0, 1.0).unwrap(),
            RatePoint::new(0.0, 1.1).unwrap(),
        ];
        assert!(RateCurve::new(Strategy::Joint, pts, "x").is_err());
    }

    #[test]
    fn random_walk_is_slow() {
        let spec = PhaseNoiseSpec::random_walk(0.3, 1e-3).unwrap();
        let mut rng = crate::rng::seeded_rng(5, "phase");
        let phases = spec.realize(1000, &mut rng);
        assert_eq!(phases[0], 0.3);
        for w in phases.windows(2) {
            assert!((w[1] - w[0]).abs() < 0.01);
        }
    }
}
