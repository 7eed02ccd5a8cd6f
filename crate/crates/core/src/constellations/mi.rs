//! Memoryless mutual information of discrete constellations on the complex
//! AWGN channel, for a single transmitter and for the two-transmitter
//! superposition y = sqrt(snr) (x1 + gamma x2) + w.
//!
//! The deterministic path integrates the noise with a two-dimensional
//! Gauss-Hermite rule; the Monte Carlo path averages the same log ratio and
//! reports a standard error.

use super::Constellation;
use crate::error::{Error, Result};
use crate::link::{RateCurve, RatePoint};
use crate::numeric::{gauss_hermite, log_sum_exp, KahanSum};
use crate::peak::{IrEstimate, QuadMethod, QuadratureSpec};
use crate::rng::{complex_gaussian, seeded_rng};
use crate::Complex;
use rand::Rng;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

fn check_snr(snr: f64) -> Result<()> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::invalid(format!("snr must be positive, got {snr}")));
    }
    Ok(())
}

/// I(x; y) in bits for received points `mu_k` (already amplitude-scaled)
/// with priors `p_k` in unit-variance complex noise, by 2-D Gauss-Hermite.
///
/// The point set is first rotated into a canonical frame (first nonzero
/// point on the positive real axis), so the quadrature result is exactly
/// invariant under a global phase rotation of the constellation.
fn mi_of_points_quad(points: &[Complex], priors: &[f64], gh_order: usize) -> f64 {
    let points = canonical_frame(points);
    let points = &points[..];
    let (gx, gw) = gauss_hermite(gh_order);
    let ln_priors: Vec<f64> = priors.iter().map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }).collect();
    let mut total = KahanSum::new();
    let inv_pi = 1.0 / std::f64::consts::PI;
    let mut terms = vec![0.0; points.len()];
    for (i, &mu_i) in points.iter().enumerate() {
        if priors[i] <= 0.0 {
            continue;
        }
        let mut acc = KahanSum::new();
        for (&ta, &wa) in gx.iter().zip(&gw) {
            for (&tb, &wb) in gx.iter().zip(&gw) {
                let w = Complex::new(ta, tb);
                // ln q(y|x_i) = -|w|^2 - ln pi ; shared -ln pi cancels.
                let ln_num = -w.norm_sqr();
                for (k, &mu_k) in points.iter().enumerate() {
                    let d = mu_i - mu_k + w;
                    terms[k] = ln_priors[k] - d.norm_sqr();
                }
                let ln_den = log_sum_exp(&terms);
                acc.add(wa * wb * (ln_num - ln_den));
            }
        }
        total.add(priors[i] * inv_pi * acc.value());
    }
    (total.value() * LOG2_E).max(0.0)
}

fn canonical_frame(points: &[Complex]) -> Vec<Complex> {
    let pivot = points.iter().find(|p| p.norm() > 1e-12);
    match pivot {
        Some(p) => {
            let rot = Complex::from_polar(1.0, -p.arg());
            points.iter().map(|q| q * rot).collect()
        }
        None => points.to_vec(),
    }
}

/// Monte Carlo version of [`mi_of_points_quad`], returning a standard error.
fn mi_of_points_mc(
    points: &[Complex],
    priors: &[f64],
    samples: usize,
    seed: u64,
    stream: &str,
    tolerance: f64,
) -> Result<IrEstimate> {
    let mut rng = seeded_rng(seed, stream);
    let ln_priors: Vec<f64> = priors.iter().map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }).collect();
    let mut sum = KahanSum::new();
    let mut sq = KahanSum::new();
    let mut terms = vec![0.0; points.len()];
    for _ in 0..samples {
        let i = sample_index(&mut rng, priors);
        let w = complex_gaussian(&mut rng, 1.0);
        let ln_num = -w.norm_sqr();
        for (k, &mu_k) in points.iter().enumerate() {
            let d = points[i] - mu_k + w;
            terms[k] = ln_priors[k] - d.norm_sqr();
        }
        let info = (ln_num - log_sum_exp(&terms)) * LOG2_E;
        sum.add(info);
        sq.add(info * info);
    }
    let (mean, stderr) = crate::numeric::mean_and_stderr(sum.value(), sq.value(), samples);
    if stderr > tolerance {
        return Err(Error::numerical(format!(
            "constellation MI standard error {stderr:.3e} exceeds tolerance {tolerance:.3e}"
        )));
    }
    Ok(IrEstimate { bits: mean, stderr })
}

fn sample_index<R: Rng + ?Sized>(rng: &mut R, priors: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in priors.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    priors.len() - 1
}

fn gh_order(quad: &QuadratureSpec) -> usize {
    (quad.angular_nodes / 4).clamp(16, 48)
}

/// Mutual information of one constellation at linear P/N = `snr`
/// (peak-normalized points are scaled by sqrt(snr); noise power 1).
pub fn constellation_mi_single(
    c: &Constellation,
    snr: f64,
    quad: &QuadratureSpec,
) -> Result<IrEstimate> {
    check_snr(snr)?;
    let amp = snr.sqrt();
    let points: Vec<Complex> = c.points().iter().map(|p| p * amp).collect();
    match quad.method {
        QuadMethod::GaussLegendrePolar => Ok(IrEstimate {
            bits: mi_of_points_quad(&points, c.priors(), gh_order(quad)),
            stderr: 0.0,
        }),
        QuadMethod::MonteCarlo => mi_of_points_mc(
            &points,
            c.priors(),
            quad.mc_samples,
            quad.seed,
            "constellation-mi-single",
            quad.tolerance,
        ),
    }
}

/// The rate triple of the two-transmitter superposition channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointMi {
    /// I(x1; y | x2).
    pub i1: IrEstimate,
    /// I(x2; y | x1).
    pub i2: IrEstimate,
    /// I(x1, x2; y).
    pub i_joint: IrEstimate,
}

/// Rates of y = sqrt(snr) (x1 + gamma x2) + w with discrete inputs.
/// Conditioning removes the known signal, so I1 and I2 are single-user
/// evaluations at snr and gamma^2 snr; the joint term runs on the product
/// alphabet.
pub fn constellation_mi_joint(
    c1: &Constellation,
    c2: &Constellation,
    gamma: f64,
    snr: f64,
    quad: &QuadratureSpec,
) -> Result<JointMi> {
    check_snr(snr)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma must be in [0, 1], got {gamma}")));
    }
    let i1 = constellation_mi_single(c1, snr, quad)?;
    let silent2 = c2.len() == 1 && c2.points()[0].norm() == 0.0;
    let i2 = if gamma == 0.0 || silent2 {
        IrEstimate { bits: 0.0, stderr: 0.0 }
    } else {
        constellation_mi_single(c2, gamma * gamma * snr, quad)?
    };

    let amp = snr.sqrt();
    let mut points = Vec::with_capacity(c1.len() * c2.len());
    let mut priors = Vec::with_capacity(c1.len() * c2.len());
    for (p1, &q1) in c1.points().iter().zip(c1.priors()) {
        for (p2, &q2) in c2.points().iter().zip(c2.priors()) {
            points.push((p1 + gamma * p2) * amp);
            priors.push(q1 * q2);
        }
    }
    let i_joint = match quad.method {
        QuadMethod::GaussLegendrePolar => IrEstimate {
            bits: mi_of_points_quad(&points, &priors, gh_order(quad)),
            stderr: 0.0,
        },
        QuadMethod::MonteCarlo => mi_of_points_mc(
            &points,
            &priors,
            quad.mc_samples,
            quad.seed,
            "constellation-mi-joint",
            quad.tolerance,
        )?,
    };
    Ok(JointMi { i1, i2, i_joint })
}

/// Pointwise maximum of rate curves sharing one SNR grid, with the winning
/// label per grid point.
pub fn envelope(curves: &[RateCurve]) -> Result<(RateCurve, Vec<String>)> {
    let first = curves
        .first()
        .ok_or_else(|| Error::invalid("envelope needs at least one curve"))?;
    let grid = first.snr_grid();
    for c in curves.iter().skip(1) {
        let g = c.snr_grid();
        if g.len() != grid.len() || g.iter().zip(&grid).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(Error::invalid(format!(
                "curve `{}` is on a different SNR grid",
                c.label
            )));
        }
    }
    let mut points = Vec::with_capacity(grid.len());
    let mut winners = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (best, label) = curves
            .iter()
            .map(|c| (c.points[i].rate_bits, c.label.as_str()))
            .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
            .unwrap();
        points.push(RatePoint::new(grid[i], best)?);
        winners.push(label.to_string());
    }
    Ok((RateCurve::new(first.strategy, points, "envelope")?, winners))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellations::{default_apsk, make_psk};
    use crate::link::Strategy;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::quadrature()
    }

    #[test]
    fn qpsk_ceiling_and_floor() {
        let c = make_psk(4).unwrap();
        let high = constellation_mi_single(&c, crate::units::db_to_linear(30.0), &quad()).unwrap();
        assert!((high.bits - 2.0).abs() < 1e-3, "high-snr MI {}", high.bits);
        let low = constellation_mi_single(&c, crate::units::db_to_linear(-30.0), &quad()).unwrap();
        assert!(low.bits < 2e-3, "low-snr MI {}", low.bits);
    }

    #[test]
    fn mc_matches_quadrature_for_qpsk() {
        let c = make_psk(4).unwrap();
        let q = constellation_mi_single(&c, 1.0, &quad()).unwrap();
        let mc = constellation_mi_single(&c, 1.0, &QuadratureSpec::monte_carlo(150_000, 3)).unwrap();
        assert!(
            (q.bits - mc.bits).abs() < 3.0 * mc.stderr + 1e-3,
            "quad {} vs mc {} +- {}",
            q.bits,
            mc.bits,
            mc.stderr
        );
    }

    #[test]
    fn rotation_invariance() {
        let c = make_psk(8).unwrap();
        let r = c.rotated(0.613);
        let a = constellation_mi_single(&c, 2.0, &quad()).unwrap().bits;
        let b = constellation_mi_single(&r, 2.0, &quad()).unwrap().bits;
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn monotone_in_snr() {
        let c = default_apsk(16).unwrap();
        let mut last = 0.0;
        for &snr_db in &[-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0] {
            let v = constellation_mi_single(&c, crate::units::db_to_linear(snr_db), &quad())
                .unwrap()
                .bits;
            assert!(v >= last - 1e-9, "MI not monotone at {snr_db} dB");
            last = v;
        }
    }

    #[test]
    fn silent_partner_joint_equals_single() {
        let c1 = make_psk(4).unwrap();
        let j = constellation_mi_joint(&c1, &Constellation::silent(), 1.0, 2.0, &quad()).unwrap();
        let s = constellation_mi_single(&c1, 2.0, &quad()).unwrap();
        assert!((j.i_joint.bits - s.bits).abs() < 1e-9);
        assert_eq!(j.i2.bits, 0.0);
    }

    #[test]
    fn joint_symmetric_when_balanced() {
        let a = make_psk(4).unwrap();
        let b = make_psk(8).unwrap();
        let ab = constellation_mi_joint(&a, &b, 1.0, 2.0, &quad()).unwrap();
        let ba = constellation_mi_joint(&b, &a, 1.0, 2.0, &quad()).unwrap();
        assert!((ab.i_joint.bits - ba.i_joint.bits).abs() < 1e-9);
    }

    #[test]
    fn joint_ceiling() {
        // The product-alphabet entropy log2(M1 M2) always bounds the joint
        // MI. At gamma = 1 identical PSK pairs collide (x1 + x2 = x2 + x1,
        // antipodal pairs sum to zero), so the saturation level is the
        // entropy of the superposition alphabet: 3 bits for QPSK + QPSK.
        let c = make_psk(4).unwrap();
        let snr = crate::units::db_to_linear(35.0);
        let j = constellation_mi_joint(&c, &c, 1.0, snr, &quad()).unwrap();
        assert!(j.i_joint.bits <= 4.0 + 1e-9);
        assert!((j.i_joint.bits - 3.0).abs() < 1e-3, "collision ceiling {}", j.i_joint.bits);
        // Any unbalance breaks the collisions and restores the full ceiling.
        let j = constellation_mi_joint(&c, &c, 0.8, snr, &quad()).unwrap();
        assert!(j.i_joint.bits > 3.9, "unbalanced joint MI {}", j.i_joint.bits);
        assert!(j.i_joint.bits <= 4.0 + 1e-9);
    }

    #[test]
    fn envelope_picks_winners() {
        let grid = [-5.0, 0.0, 5.0];
        let mk = |rates: [f64; 3], label: &str| {
            RateCurve::new(
                Strategy::Joint,
                grid.iter()
                    .zip(&rates)
                    .map(|(&s, &r)| RatePoint::new(s, r).unwrap())
                    .collect(),
                label,
            )
            .unwrap()
        };
        let a = mk([1.0, 2.0, 3.0], "a");
        let b = mk([1.5, 1.5, 1.5], "b");
        let (env, winners) = envelope(&[a.clone(), b]).unwrap();
        assert_eq!(winners, vec!["b", "a", "a"]);
        assert_eq!(env.points[0].rate_bits, 1.5);
        // A single curve is its own envelope.
        let (env1, _) = envelope(&[a.clone()]).unwrap();
        for (x, y) in env1.points.iter().zip(&a.points) {
            assert_eq!(x.rate_bits, y.rate_bits);
        }
    }

    #[test]
    fn envelope_rejects_mismatched_grids() {
        let a = RateCurve::new(
            Strategy::Joint,
            vec![RatePoint::new(0.0, 1.0).unwrap()],
            "a",
        )
        .unwrap();
        let b = RateCurve::new(
            Strategy::Joint,
            vec![RatePoint::new(1.0, 1.0).unwrap()],
            "b",
        )
        .unwrap();
        assert!(envelope(&[a, b]).is_err());
    }
}
