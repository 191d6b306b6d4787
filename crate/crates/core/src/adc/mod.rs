//! Quantizer bank, sense stage and the conventional and interleaved conversion pipelines.

mod bank;
mod code;
mod pipeline;
mod sense;

pub use bank::{design_widths, quantize, BankRole, Quantization, QuantizerBank, MAX_WIDTH, MIN_WIDTH};
pub use code::{thermometer_to_binary, BinaryCode, ThermometerCode, N_LEVELS};
pub use pipeline::{
    conduction_energy, run_conventional, run_interleaved, sense_energy, Anomaly, Architecture, ConversionRecord,
    EnergyBreakdown, PhaseSchedule, PipelineConfig,
};
pub use sense::{decision_error_probability, sense, ComparatorModel, SenseResult};
