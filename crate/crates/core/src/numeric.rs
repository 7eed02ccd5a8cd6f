//! Shared numerical kernels: quadrature nodes, stable summation, and a
//! complex Hermitian Cholesky factorization.

use crate::error::{Error, Result};
use crate::Complex;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre nodes and weights mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&v| v * half).collect(),
    )
}

/// Gauss-Hermite nodes and weights for weight function exp(-x^2).
///
/// Physicists' convention; ported from the classical three-term recurrence
/// with Newton refinement.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal Hermite recurrence.
            let mut p1 = std::f64::consts::PI.powf(-0.25);
            let mut p2 = 0.0;
            for j in 0..n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// log(sum(exp(v))) with max-shift for stability.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let mx = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !mx.is_finite() {
        return mx;
    }
    let s: f64 = values.iter().map(|&v| (v - mx).exp()).sum();
    mx + s.ln()
}

/// Compensated (Kahan) accumulator; keeps Monte Carlo reductions
/// order-stable to near machine precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Mean and standard error of the mean.
pub fn mean_and_stderr(samples_sum: f64, samples_sq_sum: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = samples_sum / nf;
    let var = (samples_sq_sum / nf - mean * mean).max(0.0);
    (mean, (var / nf).sqrt())
}

/// sinc(x) = sin(pi x) / (pi x).
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        let px = std::f64::consts::PI * x;
        1.0 - px * px / 6.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Cholesky factorization A = L L^H of a Hermitian positive-definite matrix
/// stored row-major. Returns the lower factor.
pub fn cholesky(a: &[Complex], n: usize) -> Result<Vec<Complex>> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![Complex::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut diag = a[j * n + j].re;
        for k in 0..j {
            diag -= l[j * n + k].norm_sqr();
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(Error::numerical(format!(
                "Cholesky pivot {diag} at column {j}: matrix not positive definite"
            )));
        }
        let d = diag.sqrt();
        l[j * n + j] = Complex::new(d, 0.0);
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    Ok(l)
}

/// log2 det(A) for Hermitian positive-definite A via Cholesky.
pub fn log2_det_hermitian(a: &[Complex], n: usize) -> Result<f64> {
    let l = cholesky(a, n)?;
    let mut acc = 0.0;
    for j in 0..n {
        acc += l[j * n + j].re.ln();
    }
    Ok(2.0 * acc / std::f64::consts::LN_2)
}

/// Solves A x = b for Hermitian positive-definite A via Cholesky.
pub fn solve_hermitian(a: &[Complex], b: &[Complex], n: usize) -> Result<Vec<Complex>> {
    let l = cholesky(a, n)?;
    // Forward: L y = b.
    let mut y = vec![Complex::new(0.0, 0.0); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i].re;
    }
    // Backward: L^H x = y.
    let mut x = vec![Complex::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i].conj() * x[k];
        }
        x[i] = s / l[i * n + i].re;
    }
    Ok(x)
}
