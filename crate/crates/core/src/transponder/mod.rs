//! Waveform-level simulation of the satellite transponder chain: RRC
//! pulse shaping, IMUX filter, nonlinear HPA, OMUX filter, downlink
//! combining with unbalance/phase noise/delay, FDM composition, and the
//! same-signal ergodic-bound machinery.
//!
//! Conventions: frames are circular (filters and delays wrap), pulse taps
//! carry continuous-time unit energy (`sum taps^2 = samples_per_symbol`), so
//! the modulated waveform power equals the symbol power and a matched
//! filter has unit gain. Downlink noise is calibrated against an explicit
//! reference power and noise bandwidth, which keeps P/N and P_sat/N
//! conventions exact at the matched-filter output.

mod chain;
mod downlink;
mod filter;
mod framedump;
mod hpa;
mod rrc;
mod samesignal;

pub use chain::apply_transponder;
pub use downlink::{
    amplitude_distribution, band_power_fraction, combine_downlink, fdm_compose, frequency_shift,
    upsample_phases, AmplitudeDistribution, NoiseCalibration,
};
pub use filter::{cyclic_fir, cyclic_fir_complex, design_mask_fir, fir_gain_at, MaskPoint};
pub use framedump::{read_frame, write_frame};
pub use hpa::HpaSpec;
pub use rrc::{matched_filter_output, modulate, rrc_taps};
pub use samesignal::{ergodic_rate_bound, same_signal_matrix, SameSignalMatrix};

use crate::error::{Error, Result};
use crate::Complex;

/// Embedded default transponder chain (same format as external spec files).
pub const DEFAULT_TRANSPONDER_CONFIG: &str = include_str!("data/transponder_default.cfg");

/// Oversampled complex baseband samples with framing metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformFrame {
    pub samples: Vec<Complex>,
    pub samples_per_symbol: usize,
    /// Symbols per second.
    pub baud_rate: f64,
    /// Carrier offset of this signal relative to the composite center, Hz.
    pub center_offset: f64,
}

impl WaveformFrame {
    pub fn new(
        samples: Vec<Complex>,
        samples_per_symbol: usize,
        baud_rate: f64,
    ) -> Result<Self> {
        if samples_per_symbol == 0 {
            return Err(Error::invalid("samples_per_symbol must be positive"));
        }
        if samples.is_empty() || samples.len() % samples_per_symbol != 0 {
            return Err(Error::invalid(format!(
                "frame length {} must be a positive multiple of samples_per_symbol {}",
                samples.len(),
                samples_per_symbol
            )));
        }
        if !(baud_rate > 0.0) {
            return Err(Error::invalid("baud_rate must be positive"));
        }
        Ok(WaveformFrame {
            samples,
            samples_per_symbol,
            baud_rate,
            center_offset: 0.0,
        })
    }

    pub fn sample_rate(&self) -> f64 {
        self.baud_rate * self.samples_per_symbol as f64
    }

    pub fn n_symbols(&self) -> usize {
        self.samples.len() / self.samples_per_symbol
    }

    /// Mean sample power.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }
}

/// Linear filter description: explicit taps, or a symmetric frequency mask
/// realized as a linear-phase FIR.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterSpec {
    FirTaps(Vec<f64>),
    FrequencyMask {
        points: Vec<MaskPoint>,
        fir_len: usize,
    },
}

impl FilterSpec {
    pub fn to_taps(&self, sample_rate: f64) -> Result<Vec<f64>> {
        match self {
            FilterSpec::FirTaps(taps) => {
                if taps.is_empty() {
                    return Err(Error::invalid("empty FIR taps"));
                }
                Ok(taps.clone())
            }
            FilterSpec::FrequencyMask { points, fir_len } => {
                design_mask_fir(points, sample_rate, *fir_len)
            }
        }
    }
}

/// The transponder chain parameters: IMUX, HPA with input back-off, OMUX.
#[derive(Debug, Clone)]
pub struct TransponderSpec {
    pub imux: FilterSpec,
    pub omux: FilterSpec,
    pub hpa: HpaSpec,
    pub ibo_db: f64,
}

impl TransponderSpec {
    /// The embedded default chain.
    pub fn default_chain() -> Self {
        Self::parse(DEFAULT_TRANSPONDER_CONFIG).expect("embedded transponder config parses")
    }

    pub fn with_ibo(mut self, ibo_db: f64) -> Result<Self> {
        if !(ibo_db >= 0.0) {
            return Err(Error::invalid("ibo_db must be >= 0"));
        }
        self.ibo_db = ibo_db;
        Ok(self)
    }

    /// Parses the key-value spec-file format with [imux], [hpa], [omux]
    /// sections. Filter sections hold "freq_mhz gain_db group_delay_ns"
    /// rows; the HPA section holds Saleh parameters or an
    /// "input_db output_db phase_deg" table.
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(PartialEq, Clone, Copy)]
        enum Section {
            Top,
            Imux,
            Hpa,
            Omux,
        }
        let mut section = Section::Top;
        let mut ibo_db = 0.0;
        let mut imux_rows: Vec<MaskPoint> = Vec::new();
        let mut omux_rows: Vec<MaskPoint> = Vec::new();
        let mut hpa_kv: Vec<(String, f64)> = Vec::new();
        let mut hpa_model = String::from("saleh");
        let mut hpa_rows: Vec<(f64, f64, f64)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[imux]" => {
                    section = Section::Imux;
                    continue;
                }
                "[hpa]" => {
                    section = Section::Hpa;
                    continue;
                }
                "[omux]" => {
                    section = Section::Omux;
                    continue;
                }
                _ if line.starts_with('[') => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("unknown section `{line}`"),
                    });
                }
                _ => {}
            }
            let parse_row = |line: &str| -> Result<Vec<f64>> {
                line.split_whitespace()
                    .map(|v| {
                        v.parse::<f64>().map_err(|_| Error::Parse {
                            line: lineno,
                            message: format!("bad number `{v}`"),
                        })
                    })
                    .collect()
            };
            match section {
                Section::Top => {
                    let (key, value) = line.split_once('=').ok_or(Error::Parse {
                        line: lineno,
                        message: format!("expected `key = value`, got `{line}`"),
                    })?;
                    match key.trim() {
                        "ibo_db" => {
                            ibo_db = value.trim().parse().map_err(|_| Error::Parse {
                                line: lineno,
                                message: format!("bad ibo_db `{value}`"),
                            })?
                        }
                        other => {
                            return Err(Error::Parse {
                                line: lineno,
                                message: format!("unknown key `{other}`"),
                            })
                        }
                    }
                }
                Section::Imux | Section::Omux => {
                    let row = parse_row(line)?;
                    if row.len() != 3 {
                        return Err(Error::Parse {
                            line: lineno,
                            message: "filter rows are `freq_mhz gain_db group_delay_ns`".into(),
                        });
                    }
                    let point = MaskPoint {
                        freq_hz: row[0] * 1e6,
                        gain_db: row[1],
                        group_delay_s: row[2] * 1e-9,
                    };
                    if section == Section::Imux {
                        imux_rows.push(point);
                    } else {
                        omux_rows.push(point);
                    }
                }
                Section::Hpa => {
                    if let Some((key, value)) = line.split_once('=') {
                        let key = key.trim();
                        let value = value.trim();
                        if key == "model" {
                            hpa_model = value.to_string();
                        } else {
                            hpa_kv.push((
                                key.to_string(),
                                value.parse().map_err(|_| Error::Parse {
                                    line: lineno,
                                    message: format!("bad number `{value}`"),
                                })?,
                            ));
                        }
                    } else {
                        let row = parse_row(line)?;
                        if row.len() != 3 {
                            return Err(Error::Parse {
                                line: lineno,
                                message: "HPA rows are `input_db output_db phase_deg`".into(),
                            });
                        }
                        hpa_rows.push((row[0], row[1], row[2]));
                    }
                }
            }
        }

        let hpa = match hpa_model.as_str() {
            "saleh" => {
                let get = |name: &str, default: f64| {
                    hpa_kv
                        .iter()
                        .find(|(k, _)| k == name)
                        .map(|(_, v)| *v)
                        .unwrap_or(default)
                };
                HpaSpec::saleh(
                    get("alpha_a", 2.1587),
                    get("beta_a", 1.1517),
                    get("alpha_phi", 4.0),
                    get("beta_phi", 3.5),
                )?
            }
            "table" => HpaSpec::table(hpa_rows)?,
            other => {
                return Err(Error::invalid(format!("unknown HPA model `{other}`")));
            }
        };
        if imux_rows.is_empty() || omux_rows.is_empty() {
            return Err(Error::invalid("spec must define [imux] and [omux] mask rows"));
        }
        if !(ibo_db >= 0.0) {
            return Err(Error::invalid("ibo_db must be >= 0"));
        }
        Ok(TransponderSpec {
            imux: FilterSpec::FrequencyMask {
                points: imux_rows,
                fir_len: 257,
            },
            omux: FilterSpec::FrequencyMask {
                points: omux_rows,
                fir_len: 257,
            },
            hpa,
            ibo_db,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_invariants() {
        let s = vec![Complex::new(1.0, 0.0); 16];
        assert!(WaveformFrame::new(s.clone(), 4, 1e6).is_ok());
        assert!(WaveformFrame::new(s.clone(), 5, 1e6).is_err()); // 16 % 5 != 0
        assert!(WaveformFrame::new(vec![], 4, 1e6).is_err());
        assert!(WaveformFrame::new(s, 4, 0.0).is_err());
    }

    #[test]
    fn default_chain_parses() {
        let spec = TransponderSpec::default_chain();
        assert_eq!(spec.ibo_db, 0.0);
        match &spec.imux {
            FilterSpec::FrequencyMask { points, .. } => {
                // -3 dB at 19 MHz: the 38 MHz bandwidth is pinned.
                let p = points.iter().find(|p| (p.freq_hz - 19e6).abs() < 1.0).unwrap();
                assert_eq!(p.gain_db, -3.0);
            }
            _ => panic!("default IMUX should be a mask"),
        }
    }

    #[test]
    fn table_hpa_spec_parses() {
        let text = "\
[imux]\n0 0 0\n19 -3 0\n30 -40 0\n\
[hpa]\nmodel = table\n-20 -18.1 0.0\n-10 -9.2 2.0\n0 -0.2 12.0\n3 0.0 17.0\n\
[omux]\n0 0 0\n19 -3 0\n30 -40 0\n";
        let spec = TransponderSpec::parse(text).unwrap();
        match spec.hpa {
            HpaSpec::Table { .. } => {}
            _ => panic!("expected table HPA"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "[imux]\n0 0 0\nbogus row here\n";
        match TransponderSpec::parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
