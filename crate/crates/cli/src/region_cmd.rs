//! The `region` command: rate-region points per SNR grid cell.

use crate::config::{Channel, SweepConfig};
use std::path::{Path, PathBuf};
use twinsat::constellations::{by_name, constellation_mi_joint};
use twinsat::peak::{peak_region, QuadratureSpec, RingDistribution};
use twinsat::region::{assemble_region_with_tol, RateRegion};
use twinsat::units::db_to_linear;

pub fn run_region(cfg: &SweepConfig, out_dir: &Path, quiet: bool) -> Result<Vec<PathBuf>, String> {
    let gamma = cfg.gamma();
    let quad = QuadratureSpec::quadrature();
    let one_ring = RingDistribution::single_ring(1.0).map_err(|e| e.to_string())?;
    let mut points_csv = String::from("snr_db,point,r1,r2\n");
    let mut summary_csv = String::from("snr_db,i1,i2,i_joint,pragmatic,single_better\n");
    for snr_db in cfg.snr_grid() {
        let snr = db_to_linear(snr_db);
        let region: RateRegion = match cfg.channel {
            Channel::AwgnAvg => twinsat::awgn::awgn_region(snr, gamma).map_err(|e| e.to_string())?,
            Channel::AwgnPeak => {
                peak_region(&one_ring, &one_ring, gamma, snr, &quad).map_err(|e| e.to_string())?
            }
            Channel::Transponder => {
                // Memoryless constellation region; the waveform-level region
                // comes from `sweep` with the joint strategy.
                let c1 = by_name(&cfg.c1).map_err(|e| e.to_string())?;
                let c2 = by_name(&cfg.c2).map_err(|e| e.to_string())?;
                let mi = constellation_mi_joint(&c1, &c2, gamma, snr, &quad)
                    .map_err(|e| e.to_string())?;
                assemble_region_with_tol(mi.i1.bits, mi.i2.bits, mi.i_joint.bits, 1e-6)
                    .map_err(|e| e.to_string())?
            }
        };
        for (name, p) in [
            ("A", region.a),
            ("B", region.b),
            ("C", region.c),
            ("D", region.d),
            ("E", region.e),
            ("F", region.f),
        ] {
            points_csv.push_str(&format!("{snr_db},{name},{},{}\n", p.0, p.1));
        }
        summary_csv.push_str(&format!(
            "{snr_db},{},{},{},{},{}\n",
            region.i1, region.i2, region.i_joint, region.pragmatic, region.single_better
        ));
        if !quiet {
            eprintln!("  region at {snr_db} dB done");
        }
    }
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    let p1 = out_dir.join(format!("region_{}_points.csv", cfg.channel.as_str()));
    let p2 = out_dir.join(format!("region_{}_summary.csv", cfg.channel.as_str()));
    std::fs::write(&p1, points_csv).map_err(|e| e.to_string())?;
    std::fs::write(&p2, summary_csv).map_err(|e| e.to_string())?;
    Ok(vec![p1, p2])
}
