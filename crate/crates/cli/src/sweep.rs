//! Sweep execution: strategy rate curves over an SNR grid, with a worker
//! pool over grid cells and deterministic CSV emission.

use crate::config::{Channel, SweepConfig};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use twinsat::awgn;
use twinsat::constellations::by_name;
use twinsat::link::{LinkConfig, PhaseNoiseSpec, Strategy};
use twinsat::peak::{
    optimize_rings, single_tx_ir, two_tx_joint_ir, QuadratureSpec, RingDistribution,
};
use twinsat::receiver::{default_ibo_db, run_strategy_chain, Scenario};
use twinsat::transponder::TransponderSpec;
use twinsat::units::db_to_linear;

/// One CSV row of a strategy curve.
#[derive(Debug, Clone)]
pub struct CsvRow {
    pub snr_db: f64,
    pub rate_bits: f64,
    pub stderr: f64,
    pub label: String,
}

/// Rates of every requested strategy at one grid cell.
type CellRates = BTreeMap<&'static str, (f64, f64)>; // label -> (bits, stderr)

fn strategies_needed(cfg: &SweepConfig) -> Vec<Strategy> {
    let mut out = Vec::new();
    for s in &cfg.strategies {
        if !out.contains(s) {
            out.push(*s);
        }
    }
    out
}

fn cell_rates(cfg: &SweepConfig, snr_db: f64) -> Result<CellRates, String> {
    match cfg.channel {
        Channel::AwgnAvg => awgn_cell(cfg, snr_db),
        Channel::AwgnPeak => peak_cell(cfg, snr_db),
        Channel::Transponder => transponder_cell(cfg, snr_db),
    }
    .map_err(|e| format!("at {snr_db} dB: {e}"))
}

fn awgn_cell(cfg: &SweepConfig, snr_db: f64) -> Result<CellRates, twinsat::Error> {
    let snr = db_to_linear(snr_db);
    let gamma = cfg.gamma();
    let r = awgn::awgn_rates(snr, gamma)?;
    let mut cell = CellRates::new();
    for s in strategies_needed(cfg) {
        let bits = match s {
            Strategy::Joint => r.i_joint,
            Strategy::JointPragmatic => r.i_joint_pragmatic,
            Strategy::Fdm => r.i_fdm,
            Strategy::FdmPragmatic => r.i_fdm_pragmatic,
            Strategy::Alamouti => r.i_alamouti,
            Strategy::Single => r.i_single,
        };
        cell.insert(s.as_str(), (bits, 0.0));
    }
    Ok(cell)
}

fn peak_cell(cfg: &SweepConfig, snr_db: f64) -> Result<CellRates, twinsat::Error> {
    let snr = db_to_linear(snr_db);
    let gamma = cfg.gamma();
    let quad = QuadratureSpec::quadrature();
    // Single-user rates use the optimized ring envelope; the joint rate
    // uses one ring per transmitter, which is where it peaks.
    let envelope = |s: f64| -> Result<f64, twinsat::Error> {
        Ok(optimize_rings(cfg.m_max, s, &quad)?.bits)
    };
    let one_ring = RingDistribution::single_ring(1.0)?;
    let mut cell = CellRates::new();
    for s in strategies_needed(cfg) {
        let (bits, err) = match s {
            Strategy::Single => (envelope(snr)?, 0.0),
            Strategy::Alamouti => (envelope((1.0 + gamma * gamma) * snr)?, 0.0),
            Strategy::Fdm => (
                0.5 * (envelope(2.0 * snr)? + envelope(2.0 * gamma * gamma * snr)?),
                0.0,
            ),
            Strategy::FdmPragmatic => (
                envelope(2.0 * snr)?.min(envelope(2.0 * gamma * gamma * snr)?),
                0.0,
            ),
            Strategy::Joint => {
                let ir = two_tx_joint_ir(&one_ring, &one_ring, gamma, snr, &quad)?;
                (ir.bits, ir.stderr)
            }
            Strategy::JointPragmatic => {
                let ij = two_tx_joint_ir(&one_ring, &one_ring, gamma, snr, &quad)?;
                let i2 = single_tx_ir(&one_ring, gamma * gamma * snr, &quad)?;
                (ij.bits.min(2.0 * i2.bits), ij.stderr + i2.stderr)
            }
        };
        cell.insert(s.as_str(), (bits, err));
    }
    Ok(cell)
}

fn transponder_cell(cfg: &SweepConfig, snr_db: f64) -> Result<CellRates, twinsat::Error> {
    let gamma = cfg.gamma();
    let c1 = by_name(&cfg.c1)?;
    let c2 = by_name(&cfg.c2)?;
    let base_spec = match &cfg.transponder_spec {
        Some(path) => TransponderSpec::parse(&std::fs::read_to_string(path)?)?,
        None => TransponderSpec::default_chain(),
    };
    let ibo = cfg.ibo_db.unwrap_or_else(|| default_ibo_db(&c1));
    let spec = base_spec.with_ibo(ibo)?;
    let link = if gamma == 0.0 {
        LinkConfig::single_satellite(snr_db, cfg.seed)?
    } else {
        LinkConfig::new(snr_db, gamma, cfg.seed)?
    };
    let link = if cfg.phase_step_std > 0.0 {
        link.with_phase_noise(PhaseNoiseSpec::random_walk(0.0, cfg.phase_step_std)?)
    } else {
        link
    };

    // One chain run covers a strategy and its pragmatic variant.
    let mut cell = CellRates::new();
    let requested = strategies_needed(cfg);
    let family = |s: Strategy| match s {
        Strategy::Joint | Strategy::JointPragmatic => Strategy::Joint,
        Strategy::Fdm | Strategy::FdmPragmatic => Strategy::Fdm,
        other => other,
    };
    let mut families: Vec<Strategy> = Vec::new();
    for s in &requested {
        let f = family(*s);
        if !families.contains(&f) {
            families.push(f);
        }
    }
    let mut outcomes = BTreeMap::new();
    for f in families {
        let mut scenario = Scenario::new(f, c1.clone(), c2.clone(), link.clone());
        scenario.transponder = Some(spec.clone());
        scenario.n_symbols = cfg.n_symbols;
        let out = run_strategy_chain(&scenario)?;
        outcomes.insert(f.as_str(), out);
    }
    for s in requested {
        let out = &outcomes[family(s).as_str()];
        let (bits, err) = match s {
            Strategy::JointPragmatic | Strategy::FdmPragmatic => (out.pragmatic_se, out.stderr),
            _ => (out.se, out.stderr),
        };
        cell.insert(s.as_str(), (bits, err));
    }
    Ok(cell)
}

/// Computes every requested curve over the grid, dispatching cells to
/// `jobs` worker threads. Results are deterministic for a fixed seed
/// regardless of the thread count.
pub fn compute_sweep(
    cfg: &SweepConfig,
    jobs: usize,
    quiet: bool,
) -> Result<Vec<(Strategy, Vec<CsvRow>)>, String> {
    let grid = cfg.snr_grid();
    let jobs = jobs.max(1).min(grid.len());
    let next = AtomicUsize::new(0);
    let cells: Mutex<Vec<Option<Result<CellRates, String>>>> =
        Mutex::new(vec![None; grid.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= grid.len() {
                    break;
                }
                let result = cell_rates(cfg, grid[idx]);
                if !quiet {
                    eprintln!("  [{}/{}] {} dB", idx + 1, grid.len(), grid[idx]);
                }
                cells.lock().unwrap()[idx] = Some(result);
            });
        }
    });
    let cells = cells.into_inner().unwrap();
    let mut resolved = Vec::with_capacity(grid.len());
    for cell in cells {
        resolved.push(cell.expect("worker pool covered the grid")?);
    }
    let mut curves = Vec::new();
    for s in strategies_needed(cfg) {
        let rows = grid
            .iter()
            .zip(&resolved)
            .map(|(&snr_db, cell)| {
                let (bits, err) = cell[s.as_str()];
                CsvRow {
                    snr_db,
                    rate_bits: bits,
                    stderr: err,
                    label: s.as_str().to_string(),
                }
            })
            .collect();
        curves.push((s, rows));
    }
    Ok(curves)
}

/// CSV text for one curve; plain float formatting round-trips exactly.
pub fn rows_to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from("snr_db,rate_bits,stderr,label\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.snr_db, r.rate_bits, r.stderr, r.label));
    }
    out
}

/// Parses a curve CSV back into rows (the round-trip counterpart of
/// [`rows_to_csv`]; exercised by the determinism tests).
#[cfg(test)]
pub fn csv_to_rows(text: &str) -> Result<Vec<CsvRow>, String> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line != "snr_db,rate_bits,stderr,label" {
                return Err(format!("unexpected header `{line}`"));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(format!("line {}: expected 4 fields", idx + 1));
        }
        let parse = |s: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("line {}: bad number `{s}`", idx + 1))
        };
        rows.push(CsvRow {
            snr_db: parse(fields[0])?,
            rate_bits: parse(fields[1])?,
            stderr: parse(fields[2])?,
            label: fields[3].to_string(),
        });
    }
    Ok(rows)
}

/// Runs the sweep and writes one CSV per strategy into `out_dir`. Nothing
/// is written until every cell has been computed.
pub fn run_sweep(
    cfg: &SweepConfig,
    out_dir: &Path,
    jobs: usize,
    quiet: bool,
) -> Result<Vec<PathBuf>, String> {
    let curves = compute_sweep(cfg, jobs, quiet)?;
    std::fs::create_dir_all(out_dir).map_err(|e| format!("creating {}: {e}", out_dir.display()))?;
    let mut written = Vec::new();
    for (strategy, rows) in &curves {
        let path = out_dir.join(format!("{}_{}.csv", cfg.channel.as_str(), strategy.as_str()));
        std::fs::write(&path, rows_to_csv(rows)).map_err(|e| format!("writing {}: {e}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
