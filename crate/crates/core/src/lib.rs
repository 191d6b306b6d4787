//! Macrospin simulation of SOT-MTJ devices and of a 3-bit spintronic flash ADC built from them.

pub mod adc;
pub mod config;
pub mod constants;
pub mod device;
pub mod error;
pub mod llg;
pub mod metrics;
pub mod vector;

pub use adc::{Architecture, ConversionRecord, PhaseSchedule, PipelineConfig, QuantizerBank, ThermometerCode};
pub use config::RunConfig;
pub use device::{DeviceConfig, MagState, SimOptions, SwitchOutcome};
pub use error::{Result, SimError};
pub use llg::{DriveSample, DriveWaveform, IntegratorConfig, ThermalModel, Trajectory};
pub use metrics::{DnlInlReport, MonteCarloReport, TransferCurve};
pub use vector::Vector3;
