//! Numerical verification of the strategy-ordering theorems.
//!
//! For each point of a (gamma, snr) grid the harness computes I_J, I_A,
//! I_FDM and the pragmatic variants for one input family and checks
//!
//!   I_J >= I_A >= I_FDM      and      I_J,p >= I_FDM,p
//!
//! with margins of three standard errors. The second chain is asserted only
//! for sign-symmetric input families (Gaussian, rings, even PSK), matching
//! the hypothesis of the ordering theorem. The entropy-power lemma behind
//! the FDM proof is sanity-checked with a k-nearest-neighbor entropy
//! estimator on Gaussian pairs, where the true values are known.

use crate::awgn;
use crate::constellations::{constellation_mi_joint, constellation_mi_single, Constellation};
use crate::error::Result;
use crate::peak::{
    single_tx_ir, two_tx_conditional_ir, two_tx_joint_ir, QuadratureSpec, RingDistribution,
};
use crate::rng::{complex_gaussian, seeded_rng};
use crate::units::{db_to_linear, linear_to_db};

/// Input family evaluated by the suite.
#[derive(Debug, Clone)]
pub enum TheoremInputModel {
    Gaussian,
    Ring {
        rings1: RingDistribution,
        rings2: RingDistribution,
    },
    Constellation {
        c1: Constellation,
        c2: Constellation,
    },
}

impl TheoremInputModel {
    fn label(&self) -> String {
        match self {
            TheoremInputModel::Gaussian => "gaussian".into(),
            TheoremInputModel::Ring { rings1, .. } => {
                format!("ring-m{}", rings1.ring_count())
            }
            TheoremInputModel::Constellation { c1, .. } => c1.name().to_string(),
        }
    }

    /// True when both inputs are distributionally symmetric under negation.
    fn sign_symmetric(&self) -> bool {
        match self {
            TheoremInputModel::Gaussian | TheoremInputModel::Ring { .. } => true,
            TheoremInputModel::Constellation { c1, c2 } => {
                is_sign_symmetric(c1) && is_sign_symmetric(c2)
            }
        }
    }
}

fn is_sign_symmetric(c: &Constellation) -> bool {
    c.points().iter().zip(c.priors()).all(|(p, &q)| {
        c.points()
            .iter()
            .zip(c.priors())
            .any(|(r, &s)| (p + r).norm() < 1e-9 && (q - s).abs() < 1e-12)
    })
}

/// One grid cell of the verification report.
#[derive(Debug, Clone)]
pub struct TheoremRow {
    pub model: String,
    pub gamma_db_sq: f64,
    pub snr_db: f64,
    pub i_joint: f64,
    pub i_alamouti: f64,
    pub i_fdm: f64,
    pub i_joint_p: f64,
    pub i_fdm_p: f64,
    /// Three-standard-error margin applied to the ordering checks.
    pub margin: f64,
    /// False when the Alamouti ordering's symmetry hypothesis does not
    /// apply (the
    /// I_A ordering is then recorded but not asserted).
    pub alamouti_asserted: bool,
    pub ordering_ok: bool,
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub rows: Vec<TheoremRow>,
    /// Entropy-power lemma sanity check (Gaussian model only).
    pub lemma: Option<LemmaCheck>,
}

impl TheoremReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ordering_ok) && self.lemma.as_ref().map_or(true, |l| l.pass)
    }

    /// CSV with one row per grid cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "model,gamma_db,snr_db,i_joint,i_alamouti,i_fdm,i_joint_p,i_fdm_p,ordering_ok\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.model,
                r.gamma_db_sq,
                r.snr_db,
                r.i_joint,
                r.i_alamouti,
                r.i_fdm,
                r.i_joint_p,
                r.i_fdm_p,
                r.ordering_ok
            ));
        }
        out
    }
}

/// Runs the ordering checks over the (gamma, snr_db) grid.
pub fn verify_theorem_suite(
    model: &TheoremInputModel,
    gamma_grid: &[f64],
    snr_db_grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<TheoremReport> {
    let mut rows = Vec::with_capacity(gamma_grid.len() * snr_db_grid.len());
    let symmetric = model.sign_symmetric();
    // Quadrature-based rates carry a small numerical floor on top of any
    // Monte Carlo error; closed forms are exact.
    let floor = match model {
        TheoremInputModel::Gaussian => 1e-9,
        _ => 1e-6,
    };
    for &gamma in gamma_grid {
        for &snr_db in snr_db_grid {
            let snr = db_to_linear(snr_db);
            let (rates, sigma) = strategy_rates(model, gamma, snr, quad)?;
            let margin = (3.0 * sigma).max(floor);
            let thm1 = rates.i_joint >= rates.i_fdm - margin
                && rates.i_joint_p >= rates.i_fdm_p - margin;
            let thm2 = rates.i_joint >= rates.i_alamouti - margin
                && rates.i_alamouti >= rates.i_fdm - margin;
            let ordering_ok = thm1 && (!symmetric || thm2);
            rows.push(TheoremRow {
                model: model.label(),
                gamma_db_sq: linear_to_db(gamma * gamma),
                snr_db,
                i_joint: rates.i_joint,
                i_alamouti: rates.i_alamouti,
                i_fdm: rates.i_fdm,
                i_joint_p: rates.i_joint_p,
                i_fdm_p: rates.i_fdm_p,
                margin,
                alamouti_asserted: symmetric,
                ordering_ok,
            });
        }
    }
    let lemma = match model {
        TheoremInputModel::Gaussian => Some(lemma_entropy_check(1.0, 8_000, quad.seed)),
        _ => None,
    };
    Ok(TheoremReport { rows, lemma })
}

/// The five strategy rates of one grid cell plus a combined standard error.
#[derive(Debug, Clone, Copy)]
pub struct StrategyRates {
    pub i_joint: f64,
    pub i_alamouti: f64,
    pub i_fdm: f64,
    pub i_joint_p: f64,
    pub i_fdm_p: f64,
}

pub fn strategy_rates(
    model: &TheoremInputModel,
    gamma: f64,
    snr: f64,
    quad: &QuadratureSpec,
) -> Result<(StrategyRates, f64)> {
    match model {
        TheoremInputModel::Gaussian => {
            let r = awgn::awgn_rates(snr, gamma)?;
            Ok((
                StrategyRates {
                    i_joint: r.i_joint,
                    i_alamouti: r.i_alamouti,
                    i_fdm: r.i_fdm,
                    i_joint_p: r.i_joint_pragmatic,
                    i_fdm_p: r.i_fdm_pragmatic,
                },
                0.0,
            ))
        }
        TheoremInputModel::Ring { rings1, rings2 } => {
            let snr_eff = (1.0 + gamma * gamma) * snr;
            let ij = two_tx_joint_ir(rings1, rings2, gamma, snr, quad)?;
            let i2 = two_tx_conditional_ir(rings2, gamma.max(1e-12), snr, quad)?;
            let a1 = single_tx_ir(rings1, snr_eff, quad)?;
            let a2 = single_tx_ir(rings2, snr_eff, quad)?;
            let f1 = single_tx_ir(rings1, 2.0 * snr, quad)?;
            let f2 = single_tx_ir(rings2, 2.0 * gamma * gamma * snr, quad)?;
            let sigma = ij.stderr + i2.stderr + a1.stderr + a2.stderr + f1.stderr + f2.stderr;
            Ok((
                StrategyRates {
                    i_joint: ij.bits,
                    i_alamouti: 0.5 * (a1.bits + a2.bits),
                    i_fdm: 0.5 * (f1.bits + f2.bits),
                    i_joint_p: ij.bits.min(2.0 * i2.bits),
                    i_fdm_p: f1.bits.min(f2.bits),
                },
                sigma,
            ))
        }
        TheoremInputModel::Constellation { c1, c2 } => {
            let snr_eff = (1.0 + gamma * gamma) * snr;
            let joint = constellation_mi_joint(c1, c2, gamma, snr, quad)?;
            let a1 = constellation_mi_single(c1, snr_eff, quad)?;
            let a2 = constellation_mi_single(c2, snr_eff, quad)?;
            let f1 = constellation_mi_single(c1, 2.0 * snr, quad)?;
            let f2 = constellation_mi_single(c2, 2.0 * gamma * gamma * snr, quad)?;
            let sigma = joint.i_joint.stderr
                + joint.i2.stderr
                + a1.stderr
                + a2.stderr
                + f1.stderr
                + f2.stderr;
            Ok((
                StrategyRates {
                    i_joint: joint.i_joint.bits,
                    i_alamouti: 0.5 * (a1.bits + a2.bits),
                    i_fdm: 0.5 * (f1.bits + f2.bits),
                    i_joint_p: joint.i_joint.bits.min(2.0 * joint.i2.bits),
                    i_fdm_p: f1.bits.min(f2.bits),
                },
                sigma,
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// Entropy-power lemma check
// ---------------------------------------------------------------------------

/// Result of the h(x+y) >= 1 + (h(x)+h(y))/2 check on a Gaussian pair.
#[derive(Debug, Clone, Copy)]
pub struct LemmaCheck {
    pub h_x_bits: f64,
    pub h_y_bits: f64,
    pub h_sum_bits: f64,
    /// Estimator error observed against the known Gaussian entropies.
    pub estimator_error_bits: f64,
    pub pass: bool,
}

/// Estimates the lemma quantities for x, y ~ CN(0, power) i.i.d. The
/// k-nearest-neighbor estimator has documented O(1/sqrt(n)) fluctuation, so
/// the check uses a 0.15-bit slack; the known Gaussian entropies bound the
/// estimator error explicitly.
pub fn lemma_entropy_check(power: f64, n: usize, seed: u64) -> LemmaCheck {
    let mut rng = seeded_rng(seed, "lemma-entropy");
    let xs: Vec<crate::Complex> = (0..n).map(|_| complex_gaussian(&mut rng, power)).collect();
    let ys: Vec<crate::Complex> = (0..n).map(|_| complex_gaussian(&mut rng, power)).collect();
    let sums: Vec<crate::Complex> = xs.iter().zip(&ys).map(|(a, b)| a + b).collect();
    let h_x = knn_entropy_bits(&xs, 4);
    let h_y = knn_entropy_bits(&ys, 4);
    let h_sum = knn_entropy_bits(&sums, 4);
    let truth_x = (std::f64::consts::PI * std::f64::consts::E * power).log2();
    let truth_sum = (std::f64::consts::PI * std::f64::consts::E * 2.0 * power).log2();
    let estimator_error = (h_x - truth_x)
        .abs()
        .max((h_y - truth_x).abs())
        .max((h_sum - truth_sum).abs());
    let slack = 0.15;
    let pass = h_sum >= 1.0 + 0.5 * (h_x + h_y) - slack && estimator_error < slack;
    LemmaCheck {
        h_x_bits: h_x,
        h_y_bits: h_y,
        h_sum_bits: h_sum,
        estimator_error_bits: estimator_error,
        pass,
    }
}

/// Kozachenko-Leonenko differential entropy of complex (2-D) samples, in
/// bits. Brute-force neighbor search; intended for harness-sized inputs.
pub fn knn_entropy_bits(samples: &[crate::Complex], k: usize) -> f64 {
    let n = samples.len();
    assert!(n > k + 1);
    let mut acc = 0.0;
    let mut dist = vec![0.0f64; n];
    for i in 0..n {
        for (j, s) in samples.iter().enumerate() {
            dist[j] = if i == j {
                f64::INFINITY
            } else {
                (samples[i] - s).norm()
            };
        }
        let kth = kth_smallest(&mut dist, k - 1);
        acc += kth.max(1e-300).ln();
    }
    let d = 2.0;
    let ln_c_d = std::f64::consts::PI.ln(); // area of the unit disk
    let h_nats = digamma(n as f64) - digamma(k as f64) + ln_c_d + d * acc / n as f64;
    h_nats / std::f64::consts::LN_2
}

fn kth_smallest(values: &mut [f64], k: usize) -> f64 {
    let (_, v, _) = values.select_nth_unstable_by(k, |a, b| a.partial_cmp(b).unwrap());
    *v
}

fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + x.ln() - 0.5 * inv
        - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0))
}
