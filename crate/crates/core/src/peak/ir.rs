//! Information rates of the peak-power channel, for one and two
//! transmitters, by polar quadrature or Monte Carlo.
//!
//! Everything is evaluated through the radial output density: given the
//! uniform-phase inputs, y is circularly symmetric, the conditional law is
//! the unit-variance complex Gaussian, and the rate reduces to
//! `I = h(y) - log2(pi e N)` with `h(y)` a one-dimensional integral. The
//! Monte Carlo path instead averages `log2 p(y|x) - log2 p(y)`, which is the
//! expectation form of the rate, and reports a standard error.

use super::bessel::ln_i0;
use super::density::log_output_density_radial;
use super::{QuadMethod, QuadratureSpec, RingDistribution};
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, log_sum_exp, KahanSum};
use crate::region::{assemble_region_with_tol, RateRegion};
use crate::rng::{complex_gaussian, seeded_rng};
use crate::Complex;
use rand::Rng;

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// An information-rate value with its numerical-error report: the Monte
/// Carlo standard error, or the quadrature refinement estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrEstimate {
    pub bits: f64,
    pub stderr: f64,
}

// ---------------------------------------------------------------------------
// Radial integration machinery
// ---------------------------------------------------------------------------

/// Composite Gauss-Legendre integral of `f` over [0, r_max] with panels of
/// roughly unit noise scale.
fn integrate_radial(f: &impl Fn(f64) -> f64, r_max: f64, panel_width: f64, nodes: usize) -> f64 {
    let n_panels = ((r_max / panel_width).ceil() as usize).max(1);
    let (gx, gw) = gauss_legendre(nodes);
    let h = r_max / n_panels as f64;
    let mut acc = KahanSum::new();
    for p in 0..n_panels {
        let a = p as f64 * h;
        let mid = a + h / 2.0;
        for (&x, &w) in gx.iter().zip(&gw) {
            acc.add(w * h / 2.0 * f(mid + h / 2.0 * x));
        }
    }
    acc.value()
}

/// Differential entropy h(y) in bits from the radial log-density, with a
/// refinement-based error estimate.
fn radial_entropy_bits(log_density: &impl Fn(f64) -> f64, r_max: f64) -> (f64, f64) {
    let integrand = |rho: f64| {
        let lp = log_density(rho);
        if lp < -700.0 {
            0.0
        } else {
            -2.0 * std::f64::consts::PI * rho * lp.exp() * (lp * LOG2_E)
        }
    };
    let coarse = integrate_radial(&integrand, r_max, 0.5, 8);
    let fine = integrate_radial(&integrand, r_max, 0.25, 8);
    (fine, (fine - coarse).abs())
}

// ---------------------------------------------------------------------------
// Single transmitter
// ---------------------------------------------------------------------------

fn scaled_radii(rings: &RingDistribution, snr: f64) -> Result<Vec<f64>> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::invalid(format!("snr must be positive, got {snr}")));
    }
    Ok(rings.radii_scaled_to(snr))
}

/// Rate I(x; y) in bits/symbol of a single peak-power transmitter with the
/// given ring law, at linear P/N = `snr` (noise power 1 internally).
pub fn single_tx_ir(
    rings: &RingDistribution,
    snr: f64,
    quad: &QuadratureSpec,
) -> Result<IrEstimate> {
    let radii = scaled_radii(rings, snr)?;
    let weights = rings.weights();
    match quad.method {
        QuadMethod::GaussLegendrePolar => {
            let r_max = radii.last().copied().unwrap_or(0.0) + 8.0;
            let ld = |rho: f64| log_output_density_radial(rho, &radii, weights, 1.0);
            let (h_y, err) = radial_entropy_bits(&ld, r_max);
            let bits = h_y - (std::f64::consts::PI * std::f64::consts::E).log2();
            Ok(IrEstimate {
                bits: bits.max(0.0),
                stderr: err,
            })
        }
        QuadMethod::MonteCarlo => {
            let mut rng = seeded_rng(quad.seed, "peak-single-mc");
            let mut sum = KahanSum::new();
            let mut sq = KahanSum::new();
            let n = quad.mc_samples;
            for _ in 0..n {
                let ring = sample_ring(&mut rng, weights);
                let theta = rng.gen::<f64>() * std::f64::consts::TAU;
                let x = Complex::from_polar(radii[ring], theta);
                let w = complex_gaussian(&mut rng, 1.0);
                let y = x + w;
                let log2_cond = -w.norm_sqr() * LOG2_E - std::f64::consts::PI.log2();
                let log2_out =
                    log_output_density_radial(y.norm(), &radii, weights, 1.0) * LOG2_E;
                let info = log2_cond - log2_out;
                sum.add(info);
                sq.add(info * info);
            }
            finish_mc(sum.value(), sq.value(), n, quad.tolerance)
        }
    }
}

fn sample_ring<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

fn finish_mc(sum: f64, sq: f64, n: usize, tolerance: f64) -> Result<IrEstimate> {
    let (mean, stderr) = crate::numeric::mean_and_stderr(sum, sq, n);
    if stderr > tolerance {
        return Err(Error::numerical(format!(
            "Monte Carlo standard error {stderr:.3e} exceeds tolerance {tolerance:.3e} \
             (value {mean:.6})"
        )));
    }
    Ok(IrEstimate { bits: mean, stderr })
}

// ---------------------------------------------------------------------------
// Two transmitters
// ---------------------------------------------------------------------------

/// ln Lambda(rho; a, b): the joint-density double angular integral,
/// reduced to a single integral through the I0 identity. `a` is a ring
/// radius of transmitter 1, `b` an effective (already gamma-scaled) radius
/// of transmitter 2; noise power is 1.
fn ln_lambda(rho: f64, a: f64, b: f64, min_panels: usize) -> f64 {
    // Integrand sharpness in theta scales with sqrt(rho * b).
    let panels = (3.0 * (rho * b + 1.0).sqrt()).ceil() as usize;
    let panels = panels.clamp(min_panels.max(16), 384);
    let nodes = 8;
    let (gx, gw) = gauss_legendre(nodes);
    let h = std::f64::consts::PI / panels as f64;
    let mut terms = Vec::with_capacity(panels * nodes);
    for p in 0..panels {
        let start = p as f64 * h;
        let mid = start + h / 2.0;
        for (&x, &w) in gx.iter().zip(&gw) {
            let theta = mid + h / 2.0 * x;
            let d_sq = rho * rho + b * b - 2.0 * rho * b * theta.cos();
            let d = d_sq.max(0.0).sqrt();
            let g = -(d_sq + a * a) + ln_i0(2.0 * a * d);
            terms.push(g + (w * h / 2.0).ln());
        }
    }
    // Lambda = 2 pi * 2 * int_0^pi (...) dtheta
    log_sum_exp(&terms) + (4.0 * std::f64::consts::PI).ln()
}

/// Radial log-density of y = x1 + gamma x2 + w for ring inputs, tabulated on
/// a uniform grid for fast repeated evaluation.
pub(crate) struct JointDensityTable {
    step: f64,
    values: Vec<f64>,
}

impl JointDensityTable {
    fn build(
        radii1: &[f64],
        weights1: &[f64],
        radii_eff2: &[f64],
        weights2: &[f64],
        r_max: f64,
        step: f64,
        min_panels: usize,
    ) -> Self {
        let n = (r_max / step).ceil() as usize + 4;
        let mut values = Vec::with_capacity(n);
        let norm = -(std::f64::consts::PI).ln() - (4.0 * std::f64::consts::PI.powi(2)).ln();
        for k in 0..n {
            let rho = k as f64 * step;
            let mut terms = Vec::with_capacity(radii1.len() * radii_eff2.len());
            for (&a, &qa) in radii1.iter().zip(weights1) {
                if qa <= 0.0 {
                    continue;
                }
                for (&b, &qb) in radii_eff2.iter().zip(weights2) {
                    if qb <= 0.0 {
                        continue;
                    }
                    terms.push(qa.ln() + qb.ln() + ln_lambda(rho, a, b, min_panels));
                }
            }
            values.push(log_sum_exp(&terms) + norm);
        }
        JointDensityTable { step, values }
    }

    /// Cubic Lagrange interpolation of ln p(rho).
    fn eval(&self, rho: f64) -> f64 {
        let t = rho / self.step;
        let n = self.values.len();
        let i = (t.floor() as usize).clamp(1, n - 3);
        let f = t - i as f64;
        let (m1, p0, p1, p2) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        // 4-point cubic in f in [-1, 2].
        let c0 = p0;
        let c1 = 0.5 * (p1 - m1);
        let c2 = m1 - 2.5 * p0 + 2.0 * p1 - 0.5 * p2;
        let c3 = 0.5 * (p2 - m1) + 1.5 * (p0 - p1);
        c0 + f * (c1 + f * (c2 + f * c3))
    }
}

/// Joint rate I(x1, x2; y) in bits/symbol for two peak-power ring inputs
/// with amplitude unbalance `gamma`, at linear P/N = `snr` per transmitter.
pub fn two_tx_joint_ir(
    rings1: &RingDistribution,
    rings2: &RingDistribution,
    gamma: f64,
    snr: f64,
    quad: &QuadratureSpec,
) -> Result<IrEstimate> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma must be in [0, 1], got {gamma}")));
    }
    let radii1 = scaled_radii(rings1, snr)?;
    let radii2: Vec<f64> = scaled_radii(rings2, snr)?.iter().map(|r| r * gamma).collect();
    let w1 = rings1.weights();
    let w2 = rings2.weights();
    let a_max = radii1.last().copied().unwrap_or(0.0);
    let b_max = radii2.last().copied().unwrap_or(0.0);
    let r_max = a_max + b_max + 8.0;
    let min_panels = (quad.angular_nodes / 8).max(8);

    match quad.method {
        QuadMethod::GaussLegendrePolar => {
            let table = JointDensityTable::build(&radii1, w1, &radii2, w2, r_max, 0.01, min_panels);
            let ld = |rho: f64| table.eval(rho);
            let (h_y, err) = radial_entropy_bits(&ld, r_max);
            let bits = h_y - (std::f64::consts::PI * std::f64::consts::E).log2();
            Ok(IrEstimate {
                bits: bits.max(0.0),
                stderr: err,
            })
        }
        QuadMethod::MonteCarlo => {
            let table = JointDensityTable::build(&radii1, w1, &radii2, w2, r_max, 0.01, min_panels);
            let mut rng = seeded_rng(quad.seed, "peak-joint-mc");
            let mut sum = KahanSum::new();
            let mut sq = KahanSum::new();
            let n = quad.mc_samples;
            for _ in 0..n {
                let r1 = sample_ring(&mut rng, w1);
                let r2 = sample_ring(&mut rng, w2);
                let t1 = rng.gen::<f64>() * std::f64::consts::TAU;
                let t2 = rng.gen::<f64>() * std::f64::consts::TAU;
                let x = Complex::from_polar(radii1[r1], t1) + Complex::from_polar(radii2[r2], t2);
                let w = complex_gaussian(&mut rng, 1.0);
                let y = x + w;
                let log2_cond = -w.norm_sqr() * LOG2_E - std::f64::consts::PI.log2();
                let log2_out = table.eval(y.norm()) * LOG2_E;
                let info = log2_cond - log2_out;
                sum.add(info);
                sq.add(info * info);
            }
            finish_mc(sum.value(), sq.value(), n, quad.tolerance)
        }
    }
}

/// I(x2; y | x1): conditioning removes the known signal, so this is the
/// single-transmitter rate with the power scaled by `scale^2`.
pub fn two_tx_conditional_ir(
    rings: &RingDistribution,
    scale: f64,
    snr: f64,
    quad: &QuadratureSpec,
) -> Result<IrEstimate> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::invalid(format!("scale must be in (0, 1], got {scale}")));
    }
    single_tx_ir(rings, scale * scale * snr, quad)
}

/// Rate region of the two-transmitter peak-power channel.
pub fn peak_region(
    rings1: &RingDistribution,
    rings2: &RingDistribution,
    gamma: f64,
    snr: f64,
    quad: &QuadratureSpec,
) -> Result<RateRegion> {
    let i1 = single_tx_ir(rings1, snr, quad)?;
    let i2 = two_tx_conditional_ir(rings2, gamma, snr, quad)?;
    let ij = two_tx_joint_ir(rings1, rings2, gamma, snr, quad)?;
    let tol = 1e-6 + 3.0 * (i1.stderr + i2.stderr + ij.stderr);
    assemble_region_with_tol(i1.bits, i2.bits, ij.bits, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_ring() -> RingDistribution {
        RingDistribution::single_ring(1.0).unwrap()
    }

    #[test]
    fn degenerate_input_carries_nothing() {
        let rings = RingDistribution::new(vec![0.0], vec![1.0], 1.0).unwrap();
        let ir = single_tx_ir(&rings, 4.0, &QuadratureSpec::quadrature()).unwrap();
        assert!(ir.bits.abs() < 1e-9, "got {}", ir.bits);
    }

    #[test]
    fn single_ring_ir_bounded_by_capacity_plus_one() {
        for &snr_db in &[-5.0, 0.0, 10.0, 20.0] {
            let snr = crate::units::db_to_linear(snr_db);
            let ir = single_tx_ir(&one_ring(), snr, &QuadratureSpec::quadrature()).unwrap();
            assert!(ir.bits >= 0.0);
            assert!(ir.bits <= (1.0 + snr).log2() + 1.0, "snr {snr_db} dB: {}", ir.bits);
        }
    }

    #[test]
    fn mc_and_quadrature_agree_single() {
        let rings = RingDistribution::new(vec![0.55, 1.0], vec![0.4, 0.6], 1.0).unwrap();
        let snr = crate::units::db_to_linear(8.0);
        let q = single_tx_ir(&rings, snr, &QuadratureSpec::quadrature()).unwrap();
        let mc = single_tx_ir(&rings, snr, &QuadratureSpec::monte_carlo(200_000, 42)).unwrap();
        assert!(
            (q.bits - mc.bits).abs() < 3.0 * mc.stderr + 1e-3,
            "quad {} vs mc {} +- {}",
            q.bits,
            mc.bits,
            mc.stderr
        );
    }

    #[test]
    fn silent_partner_reduces_to_single() {
        let snr = crate::units::db_to_linear(6.0);
        let quad = QuadratureSpec::quadrature();
        let single = single_tx_ir(&one_ring(), snr, &quad).unwrap();
        let joint =
            two_tx_joint_ir(&one_ring(), &RingDistribution::silent(), 1.0, snr, &quad).unwrap();
        assert!(
            (single.bits - joint.bits).abs() < 1e-6,
            "single {} vs joint-with-silent {}",
            single.bits,
            joint.bits
        );
    }

    #[test]
    fn joint_symmetric_under_swap_at_gamma_one() {
        let d1 = RingDistribution::new(vec![0.6, 1.0], vec![0.35, 0.65], 1.0).unwrap();
        let d2 = one_ring();
        let snr = crate::units::db_to_linear(10.0);
        let quad = QuadratureSpec::quadrature();
        let a = two_tx_joint_ir(&d1, &d2, 1.0, snr, &quad).unwrap();
        let b = two_tx_joint_ir(&d2, &d1, 1.0, snr, &quad).unwrap();
        assert!((a.bits - b.bits).abs() < 1e-6, "{} vs {}", a.bits, b.bits);
    }

    #[test]
    fn conditional_is_scaled_single() {
        let rings = one_ring();
        let quad = QuadratureSpec::quadrature();
        let direct = single_tx_ir(&rings, 1.0, &quad).unwrap();
        let cond = two_tx_conditional_ir(&rings, 0.5, 4.0, &quad).unwrap();
        assert!((direct.bits - cond.bits).abs() < 1e-9);
        let ident = two_tx_conditional_ir(&rings, 1.0, 4.0, &quad).unwrap();
        let at4 = single_tx_ir(&rings, 4.0, &quad).unwrap();
        assert!((ident.bits - at4.bits).abs() < 1e-12);
    }

    #[test]
    fn joint_region_consistent() {
        let snr = crate::units::db_to_linear(10.0);
        let quad = QuadratureSpec::quadrature();
        let region = peak_region(&one_ring(), &one_ring(), 0.5, snr, &quad).unwrap();
        assert!(region.i_joint <= region.i1 + region.i2 + 1e-6);
        assert!(region.i_joint >= region.i1.max(region.i2) - 1e-6);
    }

    #[test]
    fn six_db_ceiling_at_gamma_one() {
        // Coherent alignment doubles the amplitude at most: I_J must stay
        // below the capacity envelope at 4 snr.
        let quad = QuadratureSpec::quadrature();
        for &snr_db in &[0.0, 10.0, 20.0] {
            let snr = crate::units::db_to_linear(snr_db);
            let ij = two_tx_joint_ir(&one_ring(), &one_ring(), 1.0, snr, &quad).unwrap();
            assert!(
                ij.bits <= (1.0 + 4.0 * snr).log2() + 1e-6,
                "snr {snr_db}: {} vs {}",
                ij.bits,
                (1.0 + 4.0 * snr).log2()
            );
        }
    }
}
