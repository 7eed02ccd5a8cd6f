//! Joint a-posteriori symbol detector at the equalizer output.

use super::DetectorContext;
use crate::numeric::log_sum_exp;
use crate::Complex;

/// Unnormalized log posterior weight of the hypothesis pair (x1, x2):
/// -|y - beta (x1 + gamma x2 e^{j phi})|^2 / N0. All detector arithmetic
/// stays in the log domain.
pub fn multiuser_app_log_weight(
    y_k: Complex,
    x1_hyp: Complex,
    x2_hyp: Complex,
    ctx: &DetectorContext,
) -> f64 {
    let mean = ctx.beta * (x1_hyp + ctx.gamma * x2_hyp * Complex::from_polar(1.0, ctx.phi_k));
    -(y_k - mean).norm_sqr() / ctx.n0
}

/// Normalized posterior over the joint alphabet, row-major in
/// (x1 index, x2 index).
pub fn multiuser_posterior(
    y_k: Complex,
    alphabet1: &[Complex],
    alphabet2: &[Complex],
    ctx: &DetectorContext,
) -> Vec<f64> {
    let mut logs = Vec::with_capacity(alphabet1.len() * alphabet2.len());
    for &a in alphabet1 {
        for &b in alphabet2 {
            logs.push(multiuser_app_log_weight(y_k, a, b, ctx));
        }
    }
    let z = log_sum_exp(&logs);
    logs.iter().map(|&l| (l - z).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellations::make_psk;

    fn ctx(n0: f64, phi: f64) -> DetectorContext {
        DetectorContext {
            beta: Complex::new(0.9, 0.1),
            gamma: 0.7,
            phi_k: phi,
            n0,
        }
    }

    #[test]
    fn exact_hypothesis_wins() {
        let c = make_psk(4).unwrap();
        let ctx = ctx(0.1, 0.33);
        let truth = (c.points()[1], c.points()[2]);
        let y = ctx.beta * (truth.0 + ctx.gamma * truth.1 * Complex::from_polar(1.0, ctx.phi_k));
        let mut best = (f64::NEG_INFINITY, 99, 99);
        for (i, &a) in c.points().iter().enumerate() {
            for (j, &b) in c.points().iter().enumerate() {
                let w = multiuser_app_log_weight(y, a, b, &ctx);
                if w > best.0 {
                    best = (w, i, j);
                }
            }
        }
        assert_eq!((best.1, best.2), (1, 2));
        // The true hypothesis has weight exactly 0 in the log domain.
        assert!(multiuser_app_log_weight(y, truth.0, truth.1, &ctx).abs() < 1e-12);
    }

    #[test]
    fn posterior_normalizes() {
        let c = make_psk(8).unwrap();
        let ctx = ctx(0.4, -0.8);
        let y = Complex::new(0.3, -1.1);
        let p = multiuser_posterior(y, c.points(), c.points(), &ctx);
        let sum: f64 = p.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12, "posterior sums to {sum}");
        assert!(p.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn infinite_noise_flattens_posterior() {
        let c = make_psk(4).unwrap();
        let ctx = ctx(1e12, 0.0);
        let p = multiuser_posterior(Complex::new(0.7, 0.2), c.points(), c.points(), &ctx);
        for &v in &p {
            assert!((v - 1.0 / 16.0).abs() < 1e-6);
        }
    }

    #[test]
    fn hand_computed_weight() {
        let ctx = DetectorContext {
            beta: Complex::new(1.0, 0.0),
            gamma: 0.5,
            phi_k: 0.0,
            n0: 2.0,
        };
        let y = Complex::new(1.0, 1.0);
        let x1 = Complex::new(1.0, 0.0);
        let x2 = Complex::new(0.0, 1.0);
        // mean = 1 + 0.5 j ; |y - mean|^2 = 0.25 ; weight = -0.125.
        let w = multiuser_app_log_weight(y, x1, x2, &ctx);
        assert!((w + 0.125).abs() < 1e-12);
    }
}
