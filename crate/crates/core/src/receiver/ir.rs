//! Auxiliary-channel information-rate estimation.
//!
//! The estimator averages log2 q(y_k | x_k) - log2 q(y_k) over the
//! received sequence, with q the detector's memoryless Gaussian law and
//! q(y_k) its prior-weighted mixture. Whatever the true channel (residual
//! ISI, nonlinearity), the result is an achievable lower bound for the
//! adopted receiver; a mismatched q can only lower it.

use super::DetectorContext;
use crate::constellations::Constellation;
use crate::error::{Error, Result};
use crate::numeric::{log_sum_exp, mean_and_stderr, KahanSum};
use crate::Complex;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Which mutual information the estimator measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrMode {
    /// I(x1, x2; y).
    Joint,
    /// I(x1; y | x2).
    Conditional1,
    /// I(x2; y | x1).
    Conditional2,
    /// Single-transmitter I(x; y) (no second-satellite term in the law).
    Single,
}

/// Detector law over a whole record: per-symbol phases with shared bias,
/// gamma and noise power.
#[derive(Debug, Clone)]
pub struct DetectorSequence {
    pub beta: Complex,
    pub gamma: f64,
    pub phi: Vec<f64>,
    pub n0: f64,
}

impl DetectorSequence {
    pub fn at(&self, k: usize) -> DetectorContext {
        DetectorContext {
            beta: self.beta,
            gamma: self.gamma,
            phi_k: self.phi[k],
            n0: self.n0,
        }
    }
}

/// An information-rate estimate in bits/symbol with its standard error;
/// `flagged` is set when the standard error misses the requested tolerance
/// (the value is still returned).
#[derive(Debug, Clone, Copy)]
pub struct McIrResult {
    pub bits_per_symbol: f64,
    pub stderr: f64,
    pub flagged: bool,
}

/// Estimates the selected rate from equalized symbol-rate outputs `y` and
/// the known transmitted sequences.
pub fn mc_ir_estimate(
    y: &[Complex],
    x1: &[Complex],
    x2: Option<&[Complex]>,
    alphabet1: &Constellation,
    alphabet2: Option<&Constellation>,
    ctx: &DetectorSequence,
    mode: IrMode,
    tolerance: f64,
) -> Result<McIrResult> {
    if y.len() < 10_000 {
        return Err(Error::invalid(format!(
            "IR estimation needs >= 1e4 symbols, got {}",
            y.len()
        )));
    }
    if x1.len() != y.len() || ctx.phi.len() != y.len() {
        return Err(Error::invalid("sequence lengths disagree"));
    }
    if !(ctx.n0 > 0.0) {
        return Err(Error::invalid("detector n0 must be positive"));
    }
    let needs_x2 = !matches!(mode, IrMode::Single);
    if needs_x2 {
        let x2 = x2.ok_or_else(|| Error::invalid("mode requires the second symbol stream"))?;
        if x2.len() != y.len() {
            return Err(Error::invalid("sequence lengths disagree"));
        }
        if alphabet2.is_none() && matches!(mode, IrMode::Joint | IrMode::Conditional2) {
            return Err(Error::invalid("mode requires the second alphabet"));
        }
    }

    let a1 = alphabet1.points();
    let p1 = alphabet1.priors();
    let (a2, p2): (&[Complex], &[f64]) = match alphabet2 {
        Some(c) => (c.points(), c.priors()),
        None => (&[], &[]),
    };

    let mut sum = KahanSum::new();
    let mut sq = KahanSum::new();
    let mut logs: Vec<f64> = Vec::new();
    for k in 0..y.len() {
        let rot = Complex::from_polar(ctx.gamma, ctx.phi[k]);
        let yk = y[k];
        // ln q(y | x1, x2) with the actual transmitted pair.
        let mean_true = match mode {
            IrMode::Single => ctx.beta * x1[k],
            _ => ctx.beta * (x1[k] + rot * x2.unwrap()[k]),
        };
        let ln_cond = -(yk - mean_true).norm_sqr() / ctx.n0;

        logs.clear();
        let ln_mix = match mode {
            IrMode::Single => {
                for (&a, &pa) in a1.iter().zip(p1) {
                    logs.push(pa.ln() - (yk - ctx.beta * a).norm_sqr() / ctx.n0);
                }
                log_sum_exp(&logs)
            }
            IrMode::Joint => {
                for (&a, &pa) in a1.iter().zip(p1) {
                    for (&b, &pb) in a2.iter().zip(p2) {
                        let mean = ctx.beta * (a + rot * b);
                        logs.push(pa.ln() + pb.ln() - (yk - mean).norm_sqr() / ctx.n0);
                    }
                }
                log_sum_exp(&logs)
            }
            IrMode::Conditional1 => {
                // x2 known: mixture over x1 only.
                let known = rot * x2.unwrap()[k];
                for (&a, &pa) in a1.iter().zip(p1) {
                    let mean = ctx.beta * (a + known);
                    logs.push(pa.ln() - (yk - mean).norm_sqr() / ctx.n0);
                }
                log_sum_exp(&logs)
            }
            IrMode::Conditional2 => {
                let known = x1[k];
                for (&b, &pb) in a2.iter().zip(p2) {
                    let mean = ctx.beta * (known + rot * b);
                    logs.push(pb.ln() - (yk - mean).norm_sqr() / ctx.n0);
                }
                log_sum_exp(&logs)
            }
        };
        let info = (ln_cond - ln_mix) * LOG2_E;
        sum.add(info);
        sq.add(info * info);
    }
    let (mean, stderr) = mean_and_stderr(sum.value(), sq.value(), y.len());
    Ok(McIrResult {
        bits_per_symbol: mean,
        stderr,
        flagged: stderr > tolerance,
    })
}
