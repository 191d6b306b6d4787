//! Figures of merit: transfer curve, DNL/INL, switching error statistics, throughput and power.

mod linearity;
mod montecarlo;
mod throughput;
mod transfer;

pub use linearity::{dnl_inl, DnlInlReport, RangeCheck};
pub use montecarlo::{monte_carlo_switching, trial_rng, wilson_interval, MonteCarloReport, Z95};
pub use throughput::{throughput_and_power, ThroughputSummary};
pub use transfer::{measure_transfer, Converter, SingleShotAdc, TransferCurve, MIN_STEPS_PER_CODE};
