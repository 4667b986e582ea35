//! Scenario configuration: the JSON schema and its validation.

use std::path::Path;

use biphase::{Basis, GeodesicFamily, GeodesicScenario, PlateSpec, StateVector};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_SAMPLES: usize = 2001;
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub input_state: Option<StateSpec>,
    #[serde(default)]
    pub plates: Vec<PlateConfig>,
    #[serde(default)]
    pub degrees: bool,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub outputs: Option<Vec<Quantity>>,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub scenario: Option<ScenarioConfig>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub target_state: Option<StateSpec>,
}

/// A state as written in a config file or emitted in a report.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub basis: String,
    pub amplitudes: [[f64; 2]; 3],
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateConfig {
    pub delta: f64,
    pub chi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Delta,
    Chi,
    S,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Delta => "delta",
            SweepParameter::Chi => "chi",
            SweepParameter::S => "s",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub plate: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Phases,
    Eigen,
    GeodesicCheck,
    Interference,
    Jump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyConfig {
    #[default]
    Primary,
    Secondary,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub d1: [f64; 2],
    pub d2: [f64; 2],
    #[serde(default)]
    pub family: FamilyConfig,
    /// End parameter `s`; only used when no `s` sweep is given.
    #[serde(default)]
    pub s: Option<f64>,
}

/// A validated configuration with every angle in radians.
#[derive(Debug, Clone)]
pub struct Config {
    /// Input state in the phase-plate basis, plus the basis it was given in.
    pub input: Option<(StateVector, Basis)>,
    pub plates: Vec<PlateSpec>,
    pub samples: usize,
    pub sweep: Option<Sweep>,
    pub outputs: Vec<Quantity>,
    pub phi: f64,
    pub scenario: Option<GeodesicScenario>,
    pub epsilon: f64,
    pub states: Vec<StateVector>,
    pub target: Option<StateVector>,
}

#[derive(Debug, Clone, Copy)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub plate: usize,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        biphase::curve::linspace(self.start, self.stop, self.count)
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, CliError> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        raw.validate()
    }

    pub fn require_input(&self) -> Result<StateVector, CliError> {
        self.input
            .map(|(s, _)| s)
            .ok_or_else(|| CliError::Config("config needs an input_state".into()))
    }

    pub fn require_plates(&self) -> Result<&[PlateSpec], CliError> {
        if self.plates.is_empty() {
            Err(CliError::Config("config needs at least one plate".into()))
        } else {
            Ok(&self.plates)
        }
    }

    pub fn require_scenario(&self) -> Result<GeodesicScenario, CliError> {
        self.scenario
            .ok_or_else(|| CliError::Config("config needs a scenario".into()))
    }
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{name} must be finite")))
    }
}

impl StateSpec {
    pub fn parse(&self) -> Result<StateVector, CliError> {
        let basis: Basis = self
            .basis
            .parse()
            .map_err(|e: biphase::PhaseError| CliError::Config(e.to_string()))?;
        let amps = self.amplitudes.map(|[re, im]| Complex64::new(re, im));
        // Amplitudes that already satisfy the norm invariant are taken verbatim
        // so that emitted states re-ingest bit for bit.
        StateVector::new(basis, amps)
            .or_else(|_| StateVector::normalized(basis, amps))
            .map_err(|e| CliError::Config(format!("input state: {e}")))
    }

    pub fn from_state(state: &StateVector) -> StateSpec {
        StateSpec {
            basis: state.basis().as_str().to_string(),
            amplitudes: state.amplitudes().map(|z| [z.re, z.im]),
        }
    }
}

impl RawConfig {
    pub fn validate(self) -> Result<Config, CliError> {
        let unit = if self.degrees { std::f64::consts::PI / 180.0 } else { 1.0 };
        let input = match &self.input_state {
            Some(spec) => {
                let state = spec.parse()?;
                Some((state.to_basis(Basis::Pmz), state.basis()))
            }
            None => None,
        };
        let plates = self
            .plates
            .iter()
            .map(|p| {
                let delta = finite("plate delta", p.delta)? * unit;
                let chi = finite("plate chi", p.chi)? * unit;
                PlateSpec::new(delta, chi).map_err(|e| CliError::Config(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 5 {
            return Err(CliError::Config(format!("samples must be at least 5, got {samples}")));
        }
        let sweep = match self.sweep {
            Some(s) => {
                if s.count < 2 {
                    return Err(CliError::Config(format!(
                        "sweep count must be at least 2, got {}",
                        s.count
                    )));
                }
                let start = finite("sweep start", s.start)? * unit;
                let stop = finite("sweep stop", s.stop)? * unit;
                if stop <= start {
                    return Err(CliError::Config("sweep stop must exceed start".into()));
                }
                if s.parameter == SweepParameter::S && start < 0.0 {
                    return Err(CliError::Config("an s sweep must start at s >= 0".into()));
                }
                if s.parameter != SweepParameter::S && s.plate >= plates.len() {
                    return Err(CliError::Config(format!(
                        "sweep plate index {} out of range for {} plates",
                        s.plate,
                        plates.len()
                    )));
                }
                Some(Sweep {
                    parameter: s.parameter,
                    start,
                    stop,
                    count: s.count,
                    plate: s.plate,
                })
            }
            None => None,
        };
        let mut outputs: Vec<Quantity> = Vec::new();
        for q in self.outputs.unwrap_or_else(|| vec![Quantity::Phases]) {
            if !outputs.contains(&q) {
                outputs.push(q);
            }
        }
        if outputs.is_empty() {
            return Err(CliError::Config("outputs must name at least one quantity".into()));
        }
        let scenario = match self.scenario {
            Some(sc) => {
                let family = match sc.family {
                    FamilyConfig::Primary => GeodesicFamily::Primary,
                    FamilyConfig::Secondary => GeodesicFamily::Secondary,
                };
                let s = finite("scenario s", sc.s.unwrap_or(0.0))? * unit;
                let d1 = Complex64::new(finite("d1", sc.d1[0])?, finite("d1", sc.d1[1])?);
                let d2 = Complex64::new(finite("d2", sc.d2[0])?, finite("d2", sc.d2[1])?);
                Some(
                    GeodesicScenario::normalized(d1, d2, s, family)
                        .map_err(|e| CliError::Config(format!("scenario: {e}")))?,
                )
            }
            None => None,
        };
        let epsilon = finite("epsilon", self.epsilon.unwrap_or(DEFAULT_EPSILON / unit))? * unit;
        let states = self
            .states
            .iter()
            .map(|s| s.parse().map(|v| v.to_basis(Basis::Pmz)))
            .collect::<Result<Vec<_>, _>>()?;
        let target = match &self.target_state {
            Some(s) => Some(s.parse()?.to_basis(Basis::Pmz)),
            None => None,
        };
        Ok(Config {
            input,
            plates,
            samples,
            sweep,
            outputs,
            phi: finite("phi", self.phi)? * unit,
            scenario,
            epsilon,
            states,
            target,
        })
    }
}
