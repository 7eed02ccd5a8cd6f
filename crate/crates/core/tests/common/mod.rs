//! Independent oracles for the information-rate paths.
//!
//! Everything here is brute-force numerical integration with its own
//! primitives (trapezoid angular integrals instead of the Bessel identity,
//! Simpson grids instead of Gauss rules), so agreement with the library is
//! a genuine two-route check.
#![allow(dead_code)] // each integration-test target compiles its own copy

use twinsat::Complex;

/// Output density p(y) at |y| = rho for ring inputs in unit-variance
/// complex noise, via a direct angular trapezoid (no Bessel functions).
pub fn ring_density_oracle(rho: f64, radii: &[f64], weights: &[f64], n_theta: usize) -> f64 {
    let mut total = 0.0;
    for (&p, &q) in radii.iter().zip(weights) {
        if q == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for t in 0..n_theta {
            let theta = std::f64::consts::TAU * t as f64 / n_theta as f64;
            let d2 = rho * rho + p * p - 2.0 * rho * p * theta.cos();
            acc += (-d2).exp();
        }
        total += q * acc / n_theta as f64;
    }
    total / std::f64::consts::PI
}

/// Brute-force 2-D polar quadrature of the single-transmitter ring rate
/// in bits: the expectation of log2 p(y|x) - log2 p(y) integrated over the
/// noise plane around each ring, Simpson in both radius and angle.
pub fn single_tx_ir_oracle(radii: &[f64], weights: &[f64], n_rho: usize, n_psi: usize) -> f64 {
    let log2e = std::f64::consts::LOG2_E;
    let r_max = radii.iter().cloned().fold(0.0, f64::max) + 8.0;
    // Precompute log2 p(y) on the radial grid.
    let density: Vec<f64> = (0..=n_rho)
        .map(|i| ring_density_oracle(i as f64 * r_max / n_rho as f64, radii, weights, 720))
        .collect();
    let mut total = 0.0;
    for (&p, &q) in radii.iter().zip(weights) {
        if q == 0.0 {
            continue;
        }
        // Integrate over y = rho e^{j psi} with x = p on the real axis;
        // the integrand is even in psi.
        let mut outer = 0.0;
        for i in 0..=n_rho {
            let rho = i as f64 * r_max / n_rho as f64;
            let p_y = density[i];
            let mut inner = 0.0;
            for j in 0..=n_psi {
                let psi = std::f64::consts::PI * j as f64 / n_psi as f64;
                let d2 = rho * rho + p * p - 2.0 * rho * p * psi.cos();
                let cond = (-d2).exp() / std::f64::consts::PI;
                let term = if cond > 0.0 && p_y > 0.0 {
                    cond * ((-d2) * log2e - std::f64::consts::PI.log2() - p_y.log2())
                } else {
                    0.0
                };
                inner += simpson_weight(j, n_psi) * term;
            }
            inner *= std::f64::consts::PI / n_psi as f64 / 3.0;
            outer += simpson_weight(i, n_rho) * 2.0 * rho * inner;
        }
        outer *= r_max / n_rho as f64 / 3.0;
        total += q * outer;
    }
    total
}

/// Direct double angular integral of the two-transmitter Lambda term
/// (no reduction to a single integral).
pub fn lambda_oracle(rho: f64, a: f64, b: f64, n_theta: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n_theta {
        let t1 = std::f64::consts::TAU * i as f64 / n_theta as f64;
        let x1 = Complex::from_polar(a, t1);
        for j in 0..n_theta {
            let t2 = std::f64::consts::TAU * j as f64 / n_theta as f64;
            let d = Complex::new(rho, 0.0) - x1 - Complex::from_polar(b, t2);
            acc += (-d.norm_sqr()).exp();
        }
    }
    acc * (std::f64::consts::TAU / n_theta as f64).powi(2)
}

/// Dense-grid Simpson integration of the constellation mutual information
/// (independent of the library's Gauss-Hermite rule). Points are the
/// received means; noise is unit-variance complex Gaussian.
pub fn constellation_mi_oracle(points: &[Complex], priors: &[f64], half_width: f64, n: usize) -> f64 {
    let log2e = std::f64::consts::LOG2_E;
    let h = 2.0 * half_width / n as f64;
    let mut total = 0.0;
    for (i, &mu_i) in points.iter().enumerate() {
        if priors[i] == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for a in 0..=n {
            let wr = -half_width + a as f64 * h;
            let mut row = 0.0;
            for b in 0..=n {
                let wi = -half_width + b as f64 * h;
                let w = Complex::new(wr, wi);
                let ln_num = -w.norm_sqr();
                let mut mix = 0.0;
                for (k, &mu_k) in points.iter().enumerate() {
                    let d = mu_i - mu_k + w;
                    mix += priors[k] * (-d.norm_sqr()).exp();
                }
                let term = ln_num.exp() * (ln_num - mix.ln());
                row += simpson_weight(b, n) * term;
            }
            acc += simpson_weight(a, n) * row;
        }
        total += priors[i] * acc * (h / 3.0) * (h / 3.0) / std::f64::consts::PI;
    }
    total * log2e
}

pub fn simpson_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}
