//! Spectral-efficiency analysis for two co-located broadcast satellites.
//!
//! Two satellites cover the same area and may transmit on overlapping
//! frequencies. This crate computes the rates achievable by the competing
//! transmission strategies (overlapped signals with multiuser detection,
//! FDM, Alamouti block coding, or a single satellite) under three channel
//! models of increasing realism:
//!
//! - average-power-constrained AWGN, in closed form ([`awgn`]);
//! - peak-power-constrained AWGN with amplitude-ring inputs and discrete
//!   constellations ([`peak`], [`constellations`]);
//! - a nonlinear transponder chain (IMUX / HPA / OMUX) with an adaptive
//!   fractionally-spaced MMSE receiver and simulation-based information
//!   rates ([`transponder`], [`receiver`]).
//!
//! The [`strategies`] module holds the rate-region bookkeeping shared by all
//! models, the Alamouti precoder/decoder for time-misaligned signals, and a
//! numerical harness that checks the strategy-ordering inequalities across
//! input families.

pub mod awgn;
pub mod constellations;
pub mod error;
pub mod link;
pub mod numeric;
pub mod peak;
pub mod receiver;
pub mod region;
pub mod rng;
pub mod strategies;
pub mod transponder;
pub mod units;

pub use error::{Error, Result};
pub use link::{LinkConfig, PhaseNoiseModel, PhaseNoiseSpec, RateCurve, RatePoint, Strategy};
pub use region::RateRegion;
pub use rng::seeded_rng;
pub use units::{db_to_linear, linear_to_db};

/// Complex baseband sample type used throughout the crate.
pub type Complex = num_complex::Complex<f64>;
