//! Sweep configuration: flat key-value text with section headers.

use std::fmt;
use std::path::{Path, PathBuf};
use twinsat::link::Strategy;

/// Channel model of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    AwgnAvg,
    AwgnPeak,
    Transponder,
}

impl Channel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Channel::AwgnAvg => "awgn-avg",
            Channel::AwgnPeak => "awgn-peak",
            Channel::Transponder => "transponder",
        }
    }
}

/// A config problem with its line number.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Parsed sweep configuration.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub channel: Channel,
    pub strategies: Vec<Strategy>,
    pub gamma_db_sq: f64,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub seed: u64,
    /// Ring-count cap for the peak-power single-transmitter envelope.
    pub m_max: usize,
    pub c1: String,
    pub c2: String,
    pub transponder_spec: Option<PathBuf>,
    pub n_symbols: usize,
    /// None applies the per-modulation default back-off rule.
    pub ibo_db: Option<f64>,
    pub phase_step_std: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            channel: Channel::AwgnAvg,
            strategies: vec![Strategy::Joint, Strategy::Fdm, Strategy::Alamouti, Strategy::Single],
            gamma_db_sq: 0.0,
            snr_start_db: -10.0,
            snr_stop_db: 25.0,
            snr_step_db: 0.5,
            seed: 1,
            m_max: 3,
            c1: "16psk".into(),
            c2: "16psk".into(),
            transponder_spec: None,
            n_symbols: 30_000,
            ibo_db: None,
            phase_step_std: 1e-3,
        }
    }
}

impl SweepConfig {
    /// Linear amplitude unbalance from the configured gamma^2 in dB.
    pub fn gamma(&self) -> f64 {
        twinsat::units::gamma_from_db_sq(self.gamma_db_sq)
    }

    /// The SNR grid, inclusive of the endpoint within half a step.
    pub fn snr_grid(&self) -> Vec<f64> {
        let mut grid = Vec::new();
        let mut v = self.snr_start_db;
        while v <= self.snr_stop_db + 1e-9 {
            grid.push(v);
            v += self.snr_step_db;
        }
        grid
    }
}

/// Parses and semantically validates the config text. Returns the config
/// and all diagnostics; the config is usable only when `diagnostics` has no
/// entries.
pub fn parse_config(text: &str, base_dir: &Path) -> (SweepConfig, Vec<Diagnostic>) {
    let mut cfg = SweepConfig::default();
    let mut diags = Vec::new();
    let mut section = String::from("sweep");
    let mut saw_gamma = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].to_string();
            if !["sweep", "peak", "constellations", "transponder"].contains(&section.as_str()) {
                diags.push(Diagnostic {
                    line: lineno,
                    message: format!("unknown section `[{section}]`"),
                });
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            diags.push(Diagnostic {
                line: lineno,
                message: format!("expected `key = value`, got `{line}`"),
            });
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        let bad_number = |field: &str| Diagnostic {
            line: lineno,
            message: format!("field `{field}`: bad value `{value}`"),
        };
        match (section.as_str(), key) {
            ("sweep", "channel") => match value {
                "awgn-avg" => cfg.channel = Channel::AwgnAvg,
                "awgn-peak" => cfg.channel = Channel::AwgnPeak,
                "transponder" => cfg.channel = Channel::Transponder,
                _ => diags.push(Diagnostic {
                    line: lineno,
                    message: format!(
                        "field `channel`: `{value}` is not one of awgn-avg, awgn-peak, transponder"
                    ),
                }),
            },
            ("sweep", "strategies") => {
                let mut out = Vec::new();
                for part in value.split(',') {
                    match Strategy::parse(part.trim()) {
                        Ok(s) => out.push(s),
                        Err(_) => diags.push(Diagnostic {
                            line: lineno,
                            message: format!("field `strategies`: unknown strategy `{}`", part.trim()),
                        }),
                    }
                }
                if !out.is_empty() {
                    cfg.strategies = out;
                }
            }
            ("sweep", "gamma_db_sq") => match value.parse() {
                Ok(v) => {
                    cfg.gamma_db_sq = v;
                    saw_gamma = true;
                }
                Err(_) => diags.push(bad_number("gamma_db_sq")),
            },
            ("sweep", "snr_start_db") => match value.parse() {
                Ok(v) => cfg.snr_start_db = v,
                Err(_) => diags.push(bad_number("snr_start_db")),
            },
            ("sweep", "snr_stop_db") => match value.parse() {
                Ok(v) => cfg.snr_stop_db = v,
                Err(_) => diags.push(bad_number("snr_stop_db")),
            },
            ("sweep", "snr_step_db") => match value.parse() {
                Ok(v) => cfg.snr_step_db = v,
                Err(_) => diags.push(bad_number("snr_step_db")),
            },
            ("sweep", "seed") => match value.parse() {
                Ok(v) => cfg.seed = v,
                Err(_) => diags.push(bad_number("seed")),
            },
            ("peak", "m_max") => match value.parse() {
                Ok(v) => cfg.m_max = v,
                Err(_) => diags.push(bad_number("m_max")),
            },
            ("constellations", "c1") => cfg.c1 = value.to_string(),
            ("constellations", "c2") => cfg.c2 = value.to_string(),
            ("transponder", "spec") => cfg.transponder_spec = Some(base_dir.join(value)),
            ("transponder", "n_symbols") => match value.parse() {
                Ok(v) => cfg.n_symbols = v,
                Err(_) => diags.push(bad_number("n_symbols")),
            },
            ("transponder", "ibo_db") => {
                if value == "auto" {
                    cfg.ibo_db = None;
                } else {
                    match value.parse() {
                        Ok(v) => cfg.ibo_db = Some(v),
                        Err(_) => diags.push(bad_number("ibo_db")),
                    }
                }
            }
            ("transponder", "phase_step_std") => match value.parse() {
                Ok(v) => cfg.phase_step_std = v,
                Err(_) => diags.push(bad_number("phase_step_std")),
            },
            (sec, k) => diags.push(Diagnostic {
                line: lineno,
                message: format!("unknown key `{k}` in section `[{sec}]`"),
            }),
        }
    }
    let _ = saw_gamma;
    semantic_checks(&cfg, &mut diags);
    (cfg, diags)
}

fn semantic_checks(cfg: &SweepConfig, diags: &mut Vec<Diagnostic>) {
    let mut fail = |message: String| diags.push(Diagnostic { line: 0, message });
    if !(cfg.snr_step_db > 0.0) {
        fail(format!("field `snr_step_db`: step {} must be > 0", cfg.snr_step_db));
    }
    if cfg.snr_start_db >= cfg.snr_stop_db {
        fail(format!(
            "snr grid empty: start {} must be below stop {}",
            cfg.snr_start_db, cfg.snr_stop_db
        ));
    }
    if !(0.5..=1.0).contains(&cfg.gamma()) && cfg.gamma() != 0.0 {
        fail(format!(
            "field `gamma_db_sq`: gamma = {:.4} outside [0.5, 1]; use -6.02 dB or higher",
            cfg.gamma()
        ));
    }
    if !(1..=20).contains(&cfg.m_max) {
        fail(format!("field `m_max`: {} outside [1, 20]", cfg.m_max));
    }
    for name in [&cfg.c1, &cfg.c2] {
        if twinsat::constellations::by_name(name).is_err() {
            fail(format!("field `c1`/`c2`: unknown constellation `{name}`"));
        }
    }
    if let Some(path) = &cfg.transponder_spec {
        if !path.exists() {
            fail(format!("field `spec`: file `{}` does not exist", path.display()));
        } else if let Ok(text) = std::fs::read_to_string(path) {
            if let Err(e) = twinsat::transponder::TransponderSpec::parse(&text) {
                fail(format!("field `spec`: `{}` does not parse: {e}", path.display()));
            }
        }
    }
    if let Some(ibo) = cfg.ibo_db {
        if ibo < 0.0 {
            fail(format!("field `ibo_db`: {ibo} must be >= 0 (or `auto`)"));
        }
    }
    if cfg.channel == Channel::Transponder && cfg.n_symbols < 24_000 {
        fail(format!(
            "field `n_symbols`: {} too small; FDM branches need training + 1e4 symbols each",
            cfg.n_symbols
        ));
    }
    if !(cfg.phase_step_std >= 0.0 && cfg.phase_step_std <= 0.01) {
        fail(format!(
            "field `phase_step_std`: {} outside [0, 0.01] rad/symbol",
            cfg.phase_step_std
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let (cfg, diags) = parse_config("", Path::new("."));
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(cfg.channel, Channel::AwgnAvg);
        assert_eq!(cfg.snr_grid().len(), 71);
    }

    #[test]
    fn full_config_parses() {
        let text = "\
[sweep]\nchannel = awgn-peak\nstrategies = joint, single\ngamma_db_sq = -6.02\n\
snr_start_db = -5\nsnr_stop_db = 20\nsnr_step_db = 1\nseed = 9\n\
[peak]\nm_max = 2\n";
        let (cfg, diags) = parse_config(text, Path::new("."));
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(cfg.channel, Channel::AwgnPeak);
        assert_eq!(cfg.strategies, vec![Strategy::Joint, Strategy::Single]);
        assert_eq!(cfg.m_max, 2);
        assert!((cfg.gamma() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn zero_step_diagnosed_with_field_name() {
        let (_, diags) = parse_config("snr_step_db = 0\n", Path::new("."));
        assert!(diags.iter().any(|d| d.message.contains("snr_step_db")));
    }

    #[test]
    fn missing_spec_path_diagnosed() {
        let (_, diags) = parse_config(
            "[sweep]\nchannel = transponder\n[transponder]\nspec = nope/missing.cfg\n",
            Path::new("."),
        );
        assert!(diags.iter().any(|d| d.message.contains("missing.cfg")));
    }

    #[test]
    fn bad_lines_carry_numbers() {
        let (_, diags) = parse_config("channel = awgn-avg\nwhat is this\n", Path::new("."));
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].line, 2);
    }
}
