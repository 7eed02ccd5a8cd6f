//! PSK/APSK constellations and their mutual information.
//!
//! Constellations are peak-normalized (largest amplitude 1), matching the
//! peak-power constraint of the channel they are evaluated on; an
//! average-power rescaling is available for cross-checks against the
//! average-power model. APSK ring geometry is configuration data, not code:
//! the defaults ship in `data/apsk_rings.cfg` with their provenance.

mod mi;

pub use mi::{constellation_mi_joint, constellation_mi_single, envelope, JointMi};

use crate::error::{Error, Result};
use crate::Complex;

/// Embedded default APSK geometry (same format as external config files).
pub const DEFAULT_APSK_CONFIG: &str = include_str!("data/apsk_rings.cfg");

/// A finite complex symbol alphabet with priors.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex>,
    priors: Vec<f64>,
    name: String,
}

impl Constellation {
    /// Builds a constellation with uniform priors; the peak amplitude must
    /// already be 1.
    pub fn new(points: Vec<Complex>, name: impl Into<String>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::invalid("constellation needs at least one point"));
        }
        Self::with_priors(points, vec![1.0 / n as f64; n], name)
    }

    pub fn with_priors(
        points: Vec<Complex>,
        priors: Vec<f64>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if points.is_empty() || points.len() != priors.len() {
            return Err(Error::invalid("points and priors must be non-empty, equal length"));
        }
        let peak = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if (peak - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "constellation must be peak-normalized: max amplitude {peak} != 1"
            )));
        }
        let sum: f64 = priors.iter().sum();
        if priors.iter().any(|&p| !(0.0..=1.0 + 1e-12).contains(&p)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("priors must be a probability vector"));
        }
        Ok(Constellation {
            points,
            priors,
            name: name.into(),
        })
    }

    /// The degenerate silent alphabet (one zero point); only meaningful as
    /// the second transmitter of a joint evaluation.
    pub fn silent() -> Self {
        Constellation {
            points: vec![Complex::new(0.0, 0.0)],
            priors: vec![1.0],
            name: "silent".into(),
        }
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Average symbol energy under the priors.
    pub fn average_energy(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.priors)
            .map(|(p, &q)| q * p.norm_sqr())
            .sum()
    }

    /// Copy rescaled to unit average energy (for average-power cross-checks;
    /// the peak invariant no longer applies to the result).
    pub fn scaled_to_unit_average_energy(&self) -> Constellation {
        let s = self.average_energy().sqrt();
        Constellation {
            points: self.points.iter().map(|p| p / s).collect(),
            priors: self.priors.clone(),
            name: format!("{}-avg", self.name),
        }
    }

    /// Draws `n` symbols according to the priors.
    pub fn sample_symbols(&self, n: usize, rng: &mut impl rand::Rng) -> Vec<Complex> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (p, &q) in self.points.iter().zip(&self.priors) {
                    acc += q;
                    if u < acc {
                        return *p;
                    }
                }
                *self.points.last().unwrap()
            })
            .collect()
    }

    /// Rotates every point by `phase` radians.
    pub fn rotated(&self, phase: f64) -> Constellation {
        let r = Complex::from_polar(1.0, phase);
        Constellation {
            points: self.points.iter().map(|p| p * r).collect(),
            priors: self.priors.clone(),
            name: self.name.clone(),
        }
    }

    /// Writes the "I Q prior" per-line text format with a name header.
    pub fn to_file_format(&self) -> String {
        let mut out = format!("name {}\n", self.name);
        for (p, &q) in self.points.iter().zip(&self.priors) {
            out.push_str(&format!("{} {} {}\n", p.re, p.im, q));
        }
        out
    }

    /// Parses the "I Q prior" text format.
    pub fn from_file_format(text: &str) -> Result<Self> {
        let mut name = String::from("unnamed");
        let mut points = Vec::new();
        let mut priors = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("name ") {
                name = rest.trim().to_string();
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected `I Q prior`, got `{line}`"),
                });
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("bad number `{s}`"),
                })
            };
            points.push(Complex::new(parse(fields[0])?, parse(fields[1])?));
            priors.push(parse(fields[2])?);
        }
        Constellation::with_priors(points, priors, name)
    }
}

/// M-ary PSK on the unit circle with uniform priors. QPSK uses the
/// pi/4-rotated convention; other orders start at angle 0.
pub fn make_psk(m: usize) -> Result<Constellation> {
    if ![2, 4, 8, 16, 32, 64].contains(&m) {
        return Err(Error::invalid(format!("unsupported PSK cardinality {m}")));
    }
    let offset = if m == 4 { std::f64::consts::FRAC_PI_4 } else { 0.0 };
    let points = (0..m)
        .map(|k| Complex::from_polar(1.0, offset + std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    Constellation::new(points, format!("{m}psk"))
}

/// APSK from explicit ring geometry: per-ring point counts, radii
/// (increasing, outer = 1) and first-point phases.
pub fn make_apsk(
    ring_counts: &[usize],
    ring_radii: &[f64],
    ring_phases: &[f64],
) -> Result<Constellation> {
    if ring_counts.is_empty()
        || ring_counts.len() != ring_radii.len()
        || ring_counts.len() != ring_phases.len()
    {
        return Err(Error::invalid("ring counts, radii and phases must have equal length"));
    }
    for w in ring_radii.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::invalid("ring radii must be strictly increasing"));
        }
    }
    if (ring_radii.last().unwrap() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("outer ring radius must be 1 (peak normalization)"));
    }
    let total: usize = ring_counts.iter().sum();
    let mut points = Vec::with_capacity(total);
    for ((&count, &radius), &phase) in ring_counts.iter().zip(ring_radii).zip(ring_phases) {
        if count == 0 {
            return Err(Error::invalid("ring point count must be positive"));
        }
        for k in 0..count {
            points.push(Complex::from_polar(
                radius,
                phase + std::f64::consts::TAU * k as f64 / count as f64,
            ));
        }
    }
    Constellation::new(points, format!("{total}apsk"))
}

/// Loads one APSK geometry section (e.g. "16apsk") from config text in the
/// `data/apsk_rings.cfg` format.
pub fn apsk_from_config(config: &str, section: &str) -> Result<Constellation> {
    let mut counts: Option<Vec<usize>> = None;
    let mut radii: Option<Vec<f64>> = None;
    let mut phases: Option<Vec<f64>> = None;
    let mut in_section = false;
    for (idx, raw) in config.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            in_section = line == format!("[{section}]");
            continue;
        }
        if !in_section {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected `key = values`, got `{line}`"),
        })?;
        let values = value.split_whitespace();
        match key.trim() {
            "counts" => {
                counts = Some(
                    values
                        .map(|v| {
                            v.parse().map_err(|_| Error::Parse {
                                line: idx + 1,
                                message: format!("bad count `{v}`"),
                            })
                        })
                        .collect::<Result<_>>()?,
                )
            }
            "radii" => {
                radii = Some(
                    values
                        .map(|v| {
                            v.parse().map_err(|_| Error::Parse {
                                line: idx + 1,
                                message: format!("bad radius `{v}`"),
                            })
                        })
                        .collect::<Result<_>>()?,
                )
            }
            "phases" => {
                phases = Some(
                    values
                        .map(|v| {
                            v.parse().map_err(|_| Error::Parse {
                                line: idx + 1,
                                message: format!("bad phase `{v}`"),
                            })
                        })
                        .collect::<Result<_>>()?,
                )
            }
            other => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    let counts = counts.ok_or_else(|| Error::invalid(format!("section [{section}] not found or missing counts")))?;
    let radii = radii.ok_or_else(|| Error::invalid(format!("[{section}] missing radii")))?;
    let phases = phases.ok_or_else(|| Error::invalid(format!("[{section}] missing phases")))?;
    // Renormalize so the outer ring is the unit peak.
    let outer = *radii.last().unwrap();
    let radii: Vec<f64> = radii.iter().map(|r| r / outer).collect();
    make_apsk(&counts, &radii, &phases)
}

/// Default APSK constellation of the given cardinality (16, 32 or 64) from
/// the embedded geometry config.
pub fn default_apsk(m: usize) -> Result<Constellation> {
    apsk_from_config(DEFAULT_APSK_CONFIG, &format!("{m}apsk"))
}

/// Parses names like "qpsk", "16psk", "32apsk" into constellations.
pub fn by_name(name: &str) -> Result<Constellation> {
    match name.to_ascii_lowercase().as_str() {
        "bpsk" | "2psk" => make_psk(2),
        "qpsk" | "4psk" => make_psk(4),
        "8psk" => make_psk(8),
        "16psk" => make_psk(16),
        "32psk" => make_psk(32),
        "64psk" => make_psk(64),
        "16apsk" => default_apsk(16),
        "32apsk" => default_apsk(32),
        "64apsk" => default_apsk(64),
        other => Err(Error::invalid(format!("unknown constellation `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpsk_is_pi4_rotated() {
        let c = make_psk(4).unwrap();
        let expected = [
            Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            Complex::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4),
            Complex::from_polar(1.0, 5.0 * std::f64::consts::FRAC_PI_4),
            Complex::from_polar(1.0, 7.0 * std::f64::consts::FRAC_PI_4),
        ];
        for (p, e) in c.points().iter().zip(&expected) {
            assert!((p - e).norm() < 1e-12);
        }
    }

    #[test]
    fn bpsk_is_plus_minus_one() {
        let c = make_psk(2).unwrap();
        assert!((c.points()[0] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.points()[1] - Complex::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sixteen_psk_unit_modulus() {
        let c = make_psk(16).unwrap();
        assert_eq!(c.len(), 16);
        for p in c.points() {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unsupported_cardinality_rejected() {
        assert!(make_psk(3).is_err());
        assert!(make_psk(128).is_err());
    }

    #[test]
    fn single_ring_apsk_degenerates_to_psk() {
        let a = make_apsk(&[16], &[1.0], &[0.0]).unwrap();
        let p = make_psk(16).unwrap();
        for (x, y) in a.points().iter().zip(p.points()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn default_16apsk_structure() {
        let c = default_apsk(16).unwrap();
        assert_eq!(c.len(), 16);
        let inner: Vec<_> = c.points().iter().filter(|p| p.norm() < 0.9).collect();
        assert_eq!(inner.len(), 4);
        let peak = c.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-12);
    }

    #[test]
    fn default_32_and_64_apsk_load() {
        assert_eq!(default_apsk(32).unwrap().len(), 32);
        assert_eq!(default_apsk(64).unwrap().len(), 64);
    }

    #[test]
    fn file_format_round_trip() {
        let c = default_apsk(16).unwrap();
        let text = c.to_file_format();
        let back = Constellation::from_file_format(&text).unwrap();
        assert_eq!(back.name(), c.name());
        for (a, b) in back.points().iter().zip(c.points()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn bad_file_reports_line() {
        let err = Constellation::from_file_format("name x\n0.5 0.5\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
