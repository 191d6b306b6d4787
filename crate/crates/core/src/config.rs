//! Run configuration shared by the CLI and the test harnesses. Loads from JSON or TOML;
//! every omitted field takes its default.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adc::{Architecture, BankRole, ComparatorModel, PhaseSchedule, PipelineConfig, QuantizerBank};
use crate::device::{ConversionProtocol, DeviceConfig, ResetProtocol, SimOptions, SwitchProtocol};
use crate::error::{Result, SimError};
use crate::llg::{IntegratorConfig, ThermalModel};

/// Seed of the width-mismatch draw used for the linearity regression.
pub const MISMATCH_SEED: u64 = 2024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BankDesign {
    /// Lowest threshold, A.
    pub i_min: f64,
    /// Highest threshold, A.
    pub i_max: f64,
    /// Relative 1-σ width mismatch; 0 gives the ideal ladder.
    pub mismatch_sigma: f64,
    pub mismatch_seed: u64,
}

impl Default for BankDesign {
    fn default() -> Self {
        Self { i_min: 20e-6, i_max: 140e-6, mismatch_sigma: 0.0, mismatch_seed: MISMATCH_SEED }
    }
}

impl BankDesign {
    /// Full-scale input range, A: one LSB beyond the top threshold.
    pub fn full_scale(&self) -> (f64, f64) {
        let lsb = (self.i_max - self.i_min) / 6.0;
        (self.i_min - lsb, self.i_max + lsb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub t_convert: f64,
    pub t_sense: f64,
    pub t_reset: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self { t_convert: PhaseSchedule::T_CONVERT, t_sense: PhaseSchedule::T_SENSE, t_reset: PhaseSchedule::T_RESET }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub device: DeviceConfig,
    pub bank: BankDesign,
    pub schedule: ScheduleConfig,
    pub integrator: IntegratorConfig,
    pub thermal: ThermalModel,
    pub switch: SwitchProtocol,
    pub conversion: ConversionProtocol,
    pub reset: ResetProtocol,
    pub comparator: ComparatorModel,
    pub seed: u64,
    pub output_dir: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            device: DeviceConfig::default(),
            bank: BankDesign::default(),
            schedule: ScheduleConfig::default(),
            integrator: IntegratorConfig::default(),
            thermal: ThermalModel::default(),
            switch: SwitchProtocol::delayed(),
            conversion: ConversionProtocol::default(),
            reset: ResetProtocol::default(),
            comparator: ComparatorModel::default(),
            seed: 1,
            output_dir: None,
        }
    }
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(s).map_err(|e| SimError::InvalidConfig(format!("JSON config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| SimError::InvalidConfig(format!("TOML config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a `.json` or `.toml` file; other extensions are tried as JSON, then TOML.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            Some("toml") => Self::from_toml_str(&text),
            _ => Self::from_json_str(&text).or_else(|_| Self::from_toml_str(&text)),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.device.validate()?;
        self.integrator.validate()?;
        if !(self.bank.i_min > 0.0 && self.bank.i_max > self.bank.i_min) {
            return Err(SimError::InvalidConfig("bank needs 0 < i_min < i_max".into()));
        }
        if !(self.bank.mismatch_sigma >= 0.0) {
            return Err(SimError::InvalidConfig("mismatch_sigma must be non-negative".into()));
        }
        if self.thermal.temperature < 0.0 {
            return Err(SimError::InvalidConfig("temperature must be non-negative".into()));
        }
        self.schedule(Architecture::Conventional).validate()
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions { integrator: self.integrator, thermal: self.thermal, keep_trajectory: false }
    }

    pub fn schedule(&self, architecture: Architecture) -> PhaseSchedule {
        PhaseSchedule {
            t_convert: self.schedule.t_convert,
            t_sense: self.schedule.t_sense,
            t_reset: self.schedule.t_reset,
            architecture,
        }
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            conversion: self.conversion,
            reset: self.reset,
            comparator: self.comparator,
            sim: self.sim_options(),
            seed: self.seed,
        }
    }

    /// Designed bank with the configured mismatch applied.
    pub fn bank(&self, role: BankRole) -> Result<QuantizerBank> {
        let bank = QuantizerBank::design(&self.device, self.bank.i_min, self.bank.i_max, role)?;
        if self.bank.mismatch_sigma > 0.0 {
            bank.with_width_mismatch(self.bank.mismatch_sigma, self.bank.mismatch_seed)
        } else {
            Ok(bank)
        }
    }

    /// Ideal (mismatch-free) bank.
    pub fn ideal_bank(&self, role: BankRole) -> Result<QuantizerBank> {
        QuantizerBank::design(&self.device, self.bank.i_min, self.bank.i_max, role)
    }
}
