//! Fractionally-spaced MMSE equalization at twice the symbol rate.

use super::{Adaptation, EqualizerSpec};
use crate::error::{Error, Result};
use crate::numeric::solve_hermitian;
use crate::transponder::{cyclic_fir, WaveformFrame};
use crate::Complex;

/// Receive low-pass (matched) filtering followed by decimation to
/// `out_sps` samples per symbol. The pulse is the modulator's; unit gain at
/// the symbol instants is preserved.
pub fn front_end(y: &WaveformFrame, rx_pulse: &[f64], out_sps: usize) -> Result<WaveformFrame> {
    let sps = y.samples_per_symbol;
    if out_sps == 0 || sps % out_sps != 0 {
        return Err(Error::invalid(format!(
            "cannot decimate {sps} samples/symbol to {out_sps}"
        )));
    }
    let scaled: Vec<f64> = rx_pulse.iter().map(|&p| p / sps as f64).collect();
    let filtered = cyclic_fir(&y.samples, &scaled);
    let step = sps / out_sps;
    let samples: Vec<Complex> = filtered.iter().step_by(step).copied().collect();
    Ok(WaveformFrame {
        samples,
        samples_per_symbol: out_sps,
        baud_rate: y.baud_rate,
        center_offset: y.center_offset,
    })
}

/// Result of an equalizer run.
#[derive(Debug, Clone)]
pub struct EqualizerOutput {
    /// One output per symbol.
    pub outputs: Vec<Complex>,
    pub taps: Vec<Complex>,
    /// Mean squared error over the final training window.
    pub residual_mse: f64,
    /// Complex least-squares gain from desired symbols to outputs over the
    /// converged part of the training segment.
    pub beta: Complex,
    /// Residual noise power of the auxiliary channel, estimated with beta.
    pub n0_hat: f64,
}

/// Runs the FS-MMSE equalizer over a 2 samples/symbol frame.
///
/// `desired[k]` must hold the training reference for at least
/// `spec.training_symbols` symbols; after that the equalizer freezes or
/// switches to decision-directed adaptation using `slicer` when provided.
/// A divergence detector aborts when the training MSE rises over three
/// consecutive windows.
pub fn fs_mmse_equalize(
    y: &WaveformFrame,
    desired: &[Complex],
    spec: &EqualizerSpec,
    slicer: Option<&dyn Fn(usize, Complex) -> Complex>,
) -> Result<EqualizerOutput> {
    let spec = spec.validated()?;
    if y.samples_per_symbol != 2 {
        return Err(Error::invalid(format!(
            "FS-MMSE front end runs at 2 samples/symbol, got {}",
            y.samples_per_symbol
        )));
    }
    let n_sym = y.n_symbols();
    if desired.len() < spec.training_symbols {
        return Err(Error::invalid(format!(
            "training needs {} symbols, got {}",
            spec.training_symbols,
            desired.len()
        )));
    }
    if spec.training_symbols > n_sym {
        return Err(Error::invalid("training longer than the frame"));
    }
    let nt = spec.taps;
    let half = nt / 2;
    let n2 = y.samples.len();

    let mut w = vec![Complex::new(0.0, 0.0); nt];
    w[half] = Complex::new(1.0, 0.0);
    // RLS inverse correlation matrix, delta^-1 I.
    let mut p_inv = vec![Complex::new(0.0, 0.0); nt * nt];
    if spec.algorithm == Adaptation::Rls {
        for i in 0..nt {
            p_inv[i * nt + i] = Complex::new(100.0, 0.0);
        }
    }

    let mut outputs = Vec::with_capacity(n_sym);
    let mut u = vec![Complex::new(0.0, 0.0); nt];
    // Divergence bookkeeping over training windows.
    let window = (spec.training_symbols / 8).max(50);
    let mut win_acc = 0.0;
    let mut win_count = 0usize;
    let mut last_win = f64::INFINITY;
    let mut rising = 0usize;
    let mut final_window_mse = 0.0;

    for k in 0..n_sym {
        // T/2-spaced regressor centered on symbol k.
        for (j, slot) in u.iter_mut().enumerate() {
            let idx = (2 * k + n2 + half - j) % n2;
            *slot = y.samples[idx];
        }
        let out = dot_conj(&w, &u);
        outputs.push(out);

        let reference = if k < spec.training_symbols {
            Some(desired[k])
        } else if spec.decision_directed {
            slicer.map(|s| s(k, out))
        } else {
            None
        };
        let Some(d) = reference else { continue };
        let err = d - out;

        if k < spec.training_symbols {
            win_acc += err.norm_sqr();
            win_count += 1;
            if win_count == window {
                let mse = win_acc / window as f64;
                if !mse.is_finite() {
                    return Err(Error::EqualizerDiverged(format!(
                        "training MSE became non-finite at symbol {k}"
                    )));
                }
                if mse > last_win * 1.05 {
                    rising += 1;
                    if rising >= 3 {
                        return Err(Error::EqualizerDiverged(format!(
                            "training MSE rose over {rising} consecutive windows \
                             (last {mse:.3e} at symbol {k})"
                        )));
                    }
                } else {
                    rising = 0;
                }
                last_win = mse;
                final_window_mse = mse;
                win_acc = 0.0;
                win_count = 0;
            }
        }

        match spec.algorithm {
            Adaptation::Lms => {
                let mu = spec.step_or_forgetting;
                for (wi, ui) in w.iter_mut().zip(&u) {
                    *wi += mu * ui * err.conj();
                }
            }
            Adaptation::Rls => {
                let lambda = spec.step_or_forgetting;
                // k_g = P u / (lambda + u^H P u)
                let mut pu = vec![Complex::new(0.0, 0.0); nt];
                for i in 0..nt {
                    let mut acc = Complex::new(0.0, 0.0);
                    for j in 0..nt {
                        acc += p_inv[i * nt + j] * u[j];
                    }
                    pu[i] = acc;
                }
                let denom = lambda + dot_conj(&u, &pu).re;
                let kg: Vec<Complex> = pu.iter().map(|v| v / denom).collect();
                for (wi, ki) in w.iter_mut().zip(&kg) {
                    *wi += ki * err.conj();
                }
                // P = (P - k_g u^H P) / lambda
                for i in 0..nt {
                    for j in 0..nt {
                        let upj = pu[j].conj();
                        p_inv[i * nt + j] = (p_inv[i * nt + j] - kg[i] * upj) / lambda;
                    }
                }
            }
        }
    }

    // Bias and auxiliary noise power from the converged half of training.
    let start = spec.training_symbols / 2;
    let mut num = Complex::new(0.0, 0.0);
    let mut den = 0.0;
    for k in start..spec.training_symbols {
        num += desired[k].conj() * outputs[k];
        den += desired[k].norm_sqr();
    }
    let beta = if den > 0.0 { num / den } else { Complex::new(1.0, 0.0) };
    let mut n0 = 0.0;
    for k in start..spec.training_symbols {
        n0 += (outputs[k] - beta * desired[k]).norm_sqr();
    }
    n0 /= (spec.training_symbols - start) as f64;

    Ok(EqualizerOutput {
        outputs,
        taps: w,
        residual_mse: final_window_mse,
        beta,
        n0_hat: n0.max(1e-300),
    })
}

fn dot_conj(w: &[Complex], u: &[Complex]) -> Complex {
    w.iter().zip(u).map(|(wi, ui)| wi.conj() * ui).sum()
}

/// Applies frozen equalizer taps to a 2 samples/symbol cyclic frame,
/// producing one output per symbol. Lets taps trained on one block run
/// over further blocks without boundary contamination.
pub fn apply_equalizer_taps(y: &WaveformFrame, taps: &[Complex]) -> Result<Vec<Complex>> {
    if y.samples_per_symbol != 2 {
        return Err(Error::invalid("equalizer taps run at 2 samples/symbol"));
    }
    let nt = taps.len();
    let half = nt / 2;
    let n2 = y.samples.len();
    let mut u = vec![Complex::new(0.0, 0.0); nt];
    let mut out = Vec::with_capacity(y.n_symbols());
    for k in 0..y.n_symbols() {
        for (j, slot) in u.iter_mut().enumerate() {
            *slot = y.samples[(2 * k + n2 + half - j) % n2];
        }
        out.push(dot_conj(taps, &u));
    }
    Ok(out)
}

/// Batch Wiener solution on the same record: solves R w = p over the given
/// symbol range and returns (taps, mse). This is the internal oracle the
/// adaptive algorithms are compared against.
pub fn batch_wiener(
    y: &WaveformFrame,
    desired: &[Complex],
    taps: usize,
    range: std::ops::Range<usize>,
) -> Result<(Vec<Complex>, f64)> {
    if y.samples_per_symbol != 2 {
        return Err(Error::invalid("batch Wiener expects 2 samples/symbol"));
    }
    let nt = taps;
    let half = nt / 2;
    let n2 = y.samples.len();
    let mut r = vec![Complex::new(0.0, 0.0); nt * nt];
    let mut p = vec![Complex::new(0.0, 0.0); nt];
    let mut u = vec![Complex::new(0.0, 0.0); nt];
    let mut count = 0.0;
    for k in range.clone() {
        for (j, slot) in u.iter_mut().enumerate() {
            *slot = y.samples[(2 * k + n2 + half - j) % n2];
        }
        for i in 0..nt {
            for j in 0..nt {
                r[i * nt + j] += u[i] * u[j].conj();
            }
            p[i] += u[i] * desired[k].conj();
        }
        count += 1.0;
    }
    if count == 0.0 {
        return Err(Error::invalid("empty Wiener range"));
    }
    // Diagonal loading keeps near-singular records factorable.
    let load = 1e-9 * r[0].re.max(1.0);
    for i in 0..nt {
        r[i * nt + i] += load;
    }
    // Solve R^T ... note R here accumulates u u^H without conjugate
    // transpose issues: R[i][j] = sum u_i u_j^*, p[i] = sum u_i d^*.
    // Wiener taps satisfy sum_j R[j][i]^* w_j = p[i]^* ... equivalently
    // solve R w = p with the convention y = w^H u.
    let w = solve_hermitian(&r, &p, nt)?;
    let mut mse = 0.0;
    for k in range {
        for (j, slot) in u.iter_mut().enumerate() {
            *slot = y.samples[(2 * k + n2 + half - j) % n2];
        }
        let out = dot_conj(&w, &u);
        mse += (desired[k] - out).norm_sqr();
    }
    Ok((w, mse / count))
}
