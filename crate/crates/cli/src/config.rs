//! TOML scenario files.
//!
//! ```toml
//! kind = "cylinders"          # cylinders | ring | solenoid | joint-evolve
//! [constants]                 # optional, natural units by default
//! [tolerances]                # optional, all positive
//! [output]                    # optional, dir = "out"
//! [cylinders]                 # table named after the kind
//! ```

use std::path::{Path, PathBuf};

use abphase_core::{Constants64, Interpolation, PhysicalConstants, PotentialPulse};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Cylinders,
    Ring,
    Solenoid,
    JointEvolve,
}

impl Kind {
    pub fn table(self) -> &'static str {
        match self {
            Self::Cylinders => "cylinders",
            Self::Ring => "ring",
            Self::Solenoid => "solenoid",
            Self::JointEvolve => "joint",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: Kind,
    #[serde(default)]
    pub constants: ConstantsConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    pub cylinders: Option<CylindersConfig>,
    pub ring: Option<RingConfig>,
    pub solenoid: Option<SolenoidConfig>,
    pub joint: Option<JointConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    #[default]
    Natural,
    Si,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    #[serde(default)]
    pub units: Units,
    pub hbar: Option<f64>,
    pub e_charge: Option<f64>,
    pub mu0: Option<f64>,
}

impl ConstantsConfig {
    pub fn build(&self) -> Result<Constants64> {
        let base = match self.units {
            Units::Natural => PhysicalConstants::natural(),
            Units::Si => PhysicalConstants::si(),
        };
        Ok(Constants64::new(
            self.hbar.unwrap_or(base.hbar()),
            self.e_charge.unwrap_or(base.e_charge()),
            self.mu0.unwrap_or(base.mu0()),
        )?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Largest |Σ energy terms| accepted as a cancellation.
    pub cancellation: f64,
    /// Ledger grand total against the sum of its entries.
    pub ledger: f64,
    /// Below this visibility a phase is reported as record-suppressed.
    pub visibility_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cancellation: 1e-12,
            ledger: 1e-12,
            visibility_floor: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseShape {
    #[default]
    Rectangular,
    Samples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterpolationConfig {
    Constant,
    #[default]
    Linear,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    #[serde(default)]
    pub shape: PulseShape,
    pub t_on: Option<f64>,
    pub t_off: Option<f64>,
    pub height: Option<f64>,
    pub samples: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub interpolation: InterpolationConfig,
}

fn required<T: Copy>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Config(format!("missing key `{key}`")))
}

impl PulseConfig {
    pub fn build(&self, table: &str) -> Result<PotentialPulse<f64>> {
        let key = |k: &str| format!("{table}.{k}");
        match self.shape {
            PulseShape::Rectangular => Ok(PotentialPulse::rectangular(
                required(self.t_on, &key("t_on"))?,
                required(self.t_off, &key("t_off"))?,
                required(self.height, &key("height"))?,
            )?),
            PulseShape::Samples => {
                let samples = self
                    .samples
                    .as_ref()
                    .ok_or_else(|| CliError::Config(format!("missing key `{}`", key("samples"))))?;
                let interpolation = match self.interpolation {
                    InterpolationConfig::Constant => Interpolation::PiecewiseConstant,
                    InterpolationConfig::Linear => Interpolation::PiecewiseLinear,
                };
                Ok(PotentialPulse::new(
                    samples.iter().map(|s| (s[0], s[1])).collect(),
                    interpolation,
                )?)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MovingChargeConfig {
    /// `[t, q, p]` rows with the particle in the pulsed cylinder.
    pub with_particle: Vec<[f64; 3]>,
    pub without_particle: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylindersConfig {
    pub charge: f64,
    pub t_enter: f64,
    pub t_exit: f64,
    pub capacitance: f64,
    pub kappa: f64,
    pub pointer_width: f64,
    pub pulse: PulseConfig,
    #[serde(default = "default_detector_points")]
    pub detector_points: usize,
    pub moving_charge: Option<MovingChargeConfig>,
}

fn default_detector_points() -> usize {
    181
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub path_length: f64,
    pub speed: f64,
    pub mass: f64,
    pub baseline: f64,
    pub amplitude: f64,
    /// Scan extents in units of the analytic periods.
    #[serde(default = "default_periods")]
    pub flux_periods: f64,
    #[serde(default = "default_periods")]
    pub voltage_periods: f64,
    /// Resolution of the 1-D cuts used to locate peaks.
    #[serde(default = "default_cut_points")]
    pub cut_points: usize,
    /// Resolution of each axis of the (flux, voltage) map.
    #[serde(default = "default_map_points")]
    pub map_points: usize,
    #[serde(default)]
    pub ledger_flux: f64,
    #[serde(default)]
    pub ledger_bias: f64,
}

fn default_periods() -> f64 {
    3.0
}

fn default_cut_points() -> usize {
    1201
}

fn default_map_points() -> usize {
    97
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolenoidConfig {
    pub moment: f64,
    pub turns_per_length: f64,
    pub current: f64,
    pub radius: f64,
    pub length: f64,
    #[serde(default)]
    pub dipole_offset: f64,
    #[serde(default = "default_aspect_ratios")]
    pub aspect_ratios: Vec<f64>,
    /// Time the current stays on.
    #[serde(default = "default_duration")]
    pub duration: f64,
}

fn default_aspect_ratios() -> Vec<f64> {
    vec![3.0, 10.0, 30.0, 100.0, 300.0, 1000.0]
}

fn default_duration() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub center: f64,
    pub sigma: f64,
    #[serde(default)]
    pub k0: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicConfig {
    pub omega: f64,
    #[serde(default)]
    pub center: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointPulseConfig {
    pub charge: f64,
    /// `[x_lo, x_hi)` on which the pulse acts; everywhere when absent.
    pub region: Option<[f64; 2]>,
    pub profile: PulseConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointConfig {
    pub particle_mass: f64,
    pub apparatus_mass: f64,
    pub x: AxisConfig,
    pub y: AxisConfig,
    pub particle: PacketConfig,
    pub apparatus: PacketConfig,
    /// λ in V_int = λ·x·y.
    #[serde(default)]
    pub coupling: f64,
    pub harmonic: Option<HarmonicConfig>,
    pub pulse: Option<JointPulseConfig>,
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    /// Fraction of each axis used as an absorbing layer; off when absent.
    pub absorbing_width: Option<f64>,
    /// Also run the factorized semiclassical evolution and report the
    /// phase discrepancy.
    #[serde(default = "default_true")]
    pub compare_factorized: bool,
}

fn default_sample_every() -> usize {
    10
}

fn default_true() -> bool {
    true
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, column)
}

impl ScenarioConfig {
    pub fn parse(src: &str, origin: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            CliError::Parse {
                path: origin.to_string(),
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        Self::parse(&src, &path.display().to_string())
    }

    fn validate(&self) -> Result<()> {
        let present = match self.kind {
            Kind::Cylinders => self.cylinders.is_some(),
            Kind::Ring => self.ring.is_some(),
            Kind::Solenoid => self.solenoid.is_some(),
            Kind::JointEvolve => self.joint.is_some(),
        };
        if !present {
            return Err(CliError::Config(format!(
                "missing key `{}` (required for kind {:?})",
                self.kind.table(),
                self.kind
            )));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("cancellation", t.cancellation),
            ("ledger", t.ledger),
            ("visibility_floor", t.visibility_floor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!(
                    "tolerances.{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_error_reports_position() {
        let err = ScenarioConfig::parse("kind = \"ring\"\n[ring]\npath_length = = 1\n", "x.toml")
            .unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
    }

    #[test]
    fn missing_pulse_is_named() {
        let src = r#"
kind = "cylinders"
[cylinders]
charge = 1.0
t_enter = 0.0
t_exit = 4.0
capacitance = 1.0
kappa = 1.0
pointer_width = 0.01
"#;
        let err = ScenarioConfig::parse(src, "c.toml").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("pulse"), "{err}");
    }

    #[test]
    fn kind_table_must_exist() {
        let err = ScenarioConfig::parse("kind = \"solenoid\"\n", "s.toml").unwrap_err();
        assert!(err.to_string().contains("solenoid"));
    }

    #[test]
    fn tolerances_must_be_positive() {
        let src = "kind = \"solenoid\"\n[tolerances]\nledger = 0.0\n[solenoid]\nmoment=1.0\nturns_per_length=1.0\ncurrent=1.0\nradius=1.0\nlength=10.0\n";
        assert!(ScenarioConfig::parse(src, "s.toml").is_err());
    }

    #[test]
    fn unknown_kind_is_a_parse_error() {
        let err = ScenarioConfig::parse("kind = \"torus\"\n", "t.toml").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }));
    }
}
