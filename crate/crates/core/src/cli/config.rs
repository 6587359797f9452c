//! Scenario configuration: a TOML file with `[model]`, `[grid]` and
//! `[sweep]` sections, merged with command-line and environment overrides.
//!
//! Precedence, lowest first: preset, config file, `SPIN_FC_*` environment
//! variables, command-line flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::model::{nv, temperature_ratio, ModelParams};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Full Franck-Condon table f_{m→n}.
    FcFactors,
    /// |f_{0→n}| against the hyperfine coupling.
    FcSweep,
    /// Most-favored final level from both predictors and brute force.
    Favored,
    /// Zero-temperature absorption spectra.
    Spectrum,
    /// Thermal absorption spectra.
    ThermalSpectrum,
    /// Exact against bosonic-limit factors.
    HpCompare,
    /// Collective-spin precession after a vertical transition.
    Dynamics,
    /// Run the invariant suite.
    Validate,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::FcFactors => "fc-factors",
            Scenario::FcSweep => "fc-sweep",
            Scenario::Favored => "favored",
            Scenario::Spectrum => "spectrum",
            Scenario::ThermalSpectrum => "thermal-spectrum",
            Scenario::HpCompare => "hp-compare",
            Scenario::Dynamics => "dynamics",
            Scenario::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<Scenario>,
    pub preset: Option<String>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n_spins: Option<usize>,
    pub hyperfine: Option<f64>,
    pub omega_el: Option<f64>,
    pub zfs: Option<f64>,
    pub rabi: Option<f64>,
    pub window_time: Option<f64>,
    /// `k_B T / (ħ ω_nu)`.
    pub temperature: Option<f64>,
    /// Temperature in kelvin, converted with the NV nuclear splitting.
    pub temperature_k: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub detuning_min: Option<f64>,
    pub detuning_max: Option<f64>,
    pub detuning_points: Option<usize>,
    pub time_max: Option<f64>,
    pub time_points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Couplings for `favored`, `spectrum` and `thermal-spectrum`.
    pub hyperfine: Option<Vec<f64>>,
    /// Environment sizes for `favored`.
    pub n_spins: Option<Vec<usize>>,
    /// Coupling range for `fc-sweep`.
    pub hyperfine_min: Option<f64>,
    pub hyperfine_max: Option<f64>,
    pub hyperfine_points: Option<usize>,
    /// Highest level reported by `fc-sweep` and `hp-compare`.
    pub max_level: Option<usize>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

/// Command-line and environment overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scenario: Option<Scenario>,
    pub preset: Option<String>,
    pub output: Option<PathBuf>,
    pub n_spins: Option<usize>,
    pub hyperfine: Option<f64>,
    pub window_time: Option<f64>,
    pub temperature_k: Option<f64>,
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub scenario: Scenario,
    pub params: ModelParams,
    pub output: PathBuf,
    pub grid: GridSection,
    pub sweep: SweepSection,
}

pub const DEFAULT_PRESET: &str = "nv-default";

pub fn preset(name: &str) -> Result<ModelParams, CliError> {
    match name {
        DEFAULT_PRESET => Ok(ModelParams::nv_default()),
        other => Err(CliError::Config(format!(
            "unknown preset `{other}` (available: {DEFAULT_PRESET})"
        ))),
    }
}

pub fn resolve(config: ScenarioConfig, overrides: Overrides) -> Result<Resolved, CliError> {
    let scenario = overrides
        .scenario
        .or(config.scenario)
        .ok_or_else(|| CliError::Config("no scenario given".into()))?;
    let preset_name = overrides
        .preset
        .or(config.preset)
        .unwrap_or_else(|| DEFAULT_PRESET.to_string());
    let mut params = preset(&preset_name)?;

    let m = &config.model;
    if m.temperature.is_some() && m.temperature_k.is_some() {
        return Err(CliError::Config(
            "set at most one of model.temperature and model.temperature_k".into(),
        ));
    }
    if let Some(v) = m.n_spins {
        params.n_spins = v;
    }
    if let Some(v) = m.hyperfine {
        params.hyperfine = v;
    }
    if let Some(v) = m.omega_el {
        params.omega_el = v;
    }
    if let Some(v) = m.zfs {
        params.zfs = v;
    }
    if let Some(v) = m.rabi {
        params.rabi = v;
    }
    if let Some(v) = m.window_time {
        params.window_time = v;
    }
    if let Some(v) = m.temperature {
        params.temperature = v;
    }
    if let Some(k) = m.temperature_k {
        params.temperature = kelvin_to_ratio(k)?;
    }

    if let Some(v) = overrides.n_spins {
        params.n_spins = v;
    }
    if let Some(v) = overrides.hyperfine {
        params.hyperfine = v;
    }
    if let Some(v) = overrides.window_time {
        params.window_time = v;
    }
    if let Some(k) = overrides.temperature_k {
        params.temperature = kelvin_to_ratio(k)?;
    }

    // Well-formed values outside the model's domain are domain errors.
    params.validate()?;
    validate_grid(&config.grid)?;
    validate_sweep(&config.sweep)?;

    Ok(Resolved {
        scenario,
        params,
        output: overrides
            .output
            .or(config.output)
            .unwrap_or_else(|| PathBuf::from("out")),
        grid: config.grid,
        sweep: config.sweep,
    })
}

fn kelvin_to_ratio(kelvin: f64) -> Result<f64, CliError> {
    if kelvin.is_nan() || kelvin <= 0.0 {
        return Err(crate::Error::InvalidParameter {
            name: "temperature_k",
            reason: format!("{kelvin} K must be > 0"),
        }
        .into());
    }
    Ok(temperature_ratio(kelvin, nv::OMEGA_NU_MHZ))
}

fn validate_grid(g: &GridSection) -> Result<(), CliError> {
    if let (Some(lo), Some(hi)) = (g.detuning_min, g.detuning_max) {
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(CliError::Config(format!(
                "grid.detuning_min ({lo}) must be below grid.detuning_max ({hi})"
            )));
        }
    }
    if g.detuning_min.is_some() != g.detuning_max.is_some() {
        return Err(CliError::Config(
            "grid.detuning_min and grid.detuning_max must be set together".into(),
        ));
    }
    if matches!(g.detuning_points, Some(p) if p < 2) {
        return Err(CliError::Config("grid.detuning_points must be >= 2".into()));
    }
    if matches!(g.time_points, Some(p) if p < 2) {
        return Err(CliError::Config("grid.time_points must be >= 2".into()));
    }
    if matches!(g.time_max, Some(t) if !(t.is_finite() && t > 0.0)) {
        return Err(CliError::Config("grid.time_max must be > 0".into()));
    }
    Ok(())
}

fn validate_sweep(s: &SweepSection) -> Result<(), CliError> {
    if let Some(list) = &s.hyperfine {
        if list.is_empty() || list.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(CliError::Config(
                "sweep.hyperfine must be a non-empty list of finite values >= 0".into(),
            ));
        }
    }
    if let Some(list) = &s.n_spins {
        if list.is_empty() {
            return Err(CliError::Config("sweep.n_spins must not be empty".into()));
        }
    }
    if matches!(s.hyperfine_points, Some(p) if p < 2) {
        return Err(CliError::Config(
            "sweep.hyperfine_points must be >= 2".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = r#"
            scenario = "thermal-spectrum"
            preset = "nv-default"
            output = "results"

            [model]
            n_spins = 30
            hyperfine = 2.0
            temperature_k = 300.0

            [grid]
            detuning_min = -10.0
            detuning_max = 10.0
            detuning_points = 501

            [sweep]
            hyperfine = [0.2, 2.0]
        "#;
        let cfg = ScenarioConfig::from_toml(text).unwrap();
        let r = resolve(cfg, Overrides::default()).unwrap();
        assert_eq!(r.scenario, Scenario::ThermalSpectrum);
        assert_eq!(r.params.n_spins, 30);
        assert_eq!(r.params.hyperfine, 2.0);
        assert_eq!(r.output, PathBuf::from("results"));
        assert_eq!(r.sweep.hyperfine.as_deref(), Some(&[0.2, 2.0][..]));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ScenarioConfig::from_toml("scenaro = \"spectrum\"").is_err());
        assert!(ScenarioConfig::from_toml("[model]\nspins = 3").is_err());
        assert!(ScenarioConfig::from_toml("scenario = \"plot\"").is_err());
    }

    #[test]
    fn overrides_win() {
        let cfg =
            ScenarioConfig::from_toml("scenario = \"spectrum\"\n[model]\nn_spins = 10").unwrap();
        let ov = Overrides {
            scenario: Some(Scenario::Favored),
            n_spins: Some(20),
            hyperfine: Some(1.5),
            ..Default::default()
        };
        let r = resolve(cfg, ov).unwrap();
        assert_eq!(r.scenario, Scenario::Favored);
        assert_eq!(r.params.n_spins, 20);
        assert_eq!(r.params.hyperfine, 1.5);
    }

    #[test]
    fn physical_values_validated() {
        let cfg = ScenarioConfig::from_toml("scenario = \"spectrum\"\n[model]\nhyperfine = -1.0")
            .unwrap();
        assert!(matches!(
            resolve(cfg, Overrides::default()),
            Err(CliError::Domain(_))
        ));
        let cfg =
            ScenarioConfig::from_toml("scenario = \"spectrum\"\n[model]\nn_spins = 0").unwrap();
        assert!(resolve(cfg, Overrides::default()).is_err());
        let cfg = ScenarioConfig::from_toml("scenario = \"spectrum\"").unwrap();
        let ov = Overrides {
            temperature_k: Some(0.0),
            ..Default::default()
        };
        assert!(resolve(cfg, ov).is_err());
        let cfg =
            ScenarioConfig::from_toml("preset = \"ion-trap\"\nscenario = \"spectrum\"").unwrap();
        assert!(matches!(
            resolve(cfg, Overrides::default()),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn missing_scenario_is_config_error() {
        assert!(resolve(ScenarioConfig::default(), Overrides::default()).is_err());
    }
}
