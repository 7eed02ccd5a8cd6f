//! Strategy-level machinery: rate-region assembly, Alamouti block coding
//! with time misalignment, and the theorem verification harness.

mod alamouti;
mod theorems;

pub use alamouti::{
    alamouti_decode, alamouti_precode, alamouti_round_trip, grid_tau, misaligned_slot,
    AlamoutiBlockPair,
};
pub use theorems::{
    knn_entropy_bits, lemma_entropy_check, strategy_rates, verify_theorem_suite, LemmaCheck,
    StrategyRates, TheoremInputModel, TheoremReport, TheoremRow,
};

pub use crate::region::{assemble_region, assemble_region_with_tol, RatePair, RateRegion};
