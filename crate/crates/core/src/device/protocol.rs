use serde::{Deserialize, Serialize};

use crate::device::DeviceConfig;
use crate::error::Result;
use crate::llg::{DriveSample, DriveWaveform};

/// Standard write pulse: optional idle delay, an SOT pulse with concurrent bias,
/// then the bias held with a small STT assist that pins the new state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwitchProtocol {
    pub delay: f64,
    pub sot_duration: f64,
    pub assist_duration: f64,
    pub assist_current: f64,
}

impl Default for SwitchProtocol {
    fn default() -> Self {
        Self { delay: 0.0, sot_duration: 1e-9, assist_duration: 5e-9, assist_current: 16e-6 }
    }
}

impl SwitchProtocol {
    /// Timeline of the reference trajectory: SOT onset at 0.7 ns.
    pub fn delayed() -> Self {
        Self { delay: 0.7e-9, ..Self::default() }
    }

    pub fn waveform(&self, i_sot: f64, v_bias: f64) -> DriveWaveform {
        DriveWaveform::new()
            .then("delay", self.delay, DriveSample::IDLE)
            .then("sot", self.sot_duration, DriveSample { i_sot, v_bias, i_stt: 0.0 })
            .then("assist", self.assist_duration, DriveSample { i_sot: 0.0, v_bias, i_stt: self.assist_current })
    }

    pub fn duration(&self) -> f64 {
        self.delay + self.sot_duration + self.assist_duration
    }
}

/// Conversion pulse applied to every quantizer device: the input current drives the
/// heavy metal, then a short STT assist commits whichever hemisphere m ended in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConversionProtocol {
    pub sot_duration: f64,
    pub assist_duration: f64,
    pub assist_current: f64,
    pub v_bias: f64,
}

impl Default for ConversionProtocol {
    fn default() -> Self {
        Self { sot_duration: 1e-9, assist_duration: 1e-9, assist_current: 16e-6, v_bias: 0.0 }
    }
}

impl ConversionProtocol {
    pub fn waveform(&self, i_in: f64) -> DriveWaveform {
        DriveWaveform::new()
            .then("sot", self.sot_duration, DriveSample { i_sot: i_in, v_bias: self.v_bias, i_stt: 0.0 })
            .then(
                "assist",
                self.assist_duration,
                DriveSample { i_sot: 0.0, v_bias: self.v_bias, i_stt: self.assist_current },
            )
    }

    pub fn duration(&self) -> f64 {
        self.sot_duration + self.assist_duration
    }
}

/// Reverse SOT pulse at a multiple of the zero-bias Ic, followed by a negative bias with
/// STT toward P, and an optional idle settle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResetProtocol {
    pub amplitude_factor: f64,
    pub sot_duration: f64,
    pub hold_duration: f64,
    pub hold_bias: f64,
    pub hold_current: f64,
    pub settle_duration: f64,
}

impl Default for ResetProtocol {
    fn default() -> Self {
        Self {
            amplitude_factor: 1.5,
            sot_duration: 0.6e-9,
            hold_duration: 1.12e-9,
            hold_bias: -0.4,
            hold_current: -30e-6,
            settle_duration: 0.0,
        }
    }
}

impl ResetProtocol {
    pub fn with_amplitude(self, amplitude_factor: f64) -> Self {
        Self { amplitude_factor, ..self }
    }

    pub fn with_settle(self, settle_duration: f64) -> Self {
        Self { settle_duration, ..self }
    }

    pub fn current(&self, dev: &DeviceConfig) -> Result<f64> {
        Ok(-self.amplitude_factor * dev.critical_current(0.0)?)
    }

    pub fn waveform(&self, dev: &DeviceConfig) -> Result<DriveWaveform> {
        Ok(DriveWaveform::new()
            .then("reset", self.sot_duration, DriveSample { i_sot: self.current(dev)?, v_bias: 0.0, i_stt: 0.0 })
            .then(
                "hold",
                self.hold_duration,
                DriveSample { i_sot: 0.0, v_bias: self.hold_bias, i_stt: self.hold_current },
            )
            .then("settle", self.settle_duration, DriveSample::IDLE))
    }

    pub fn duration(&self) -> f64 {
        self.sot_duration + self.hold_duration + self.settle_duration
    }
}
