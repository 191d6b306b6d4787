use serde::{Deserialize, Serialize};

use crate::adc::ConversionRecord;
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputSummary {
    pub samples: usize,
    /// Samples per second.
    pub throughput: f64,
    pub mean_period: f64,
    pub total_energy: f64,
    pub energy_per_sample: f64,
    /// Watts.
    pub average_power: f64,
}

pub fn throughput_and_power(records: &[ConversionRecord]) -> Result<ThroughputSummary> {
    if records.len() < 2 {
        return Err(SimError::InvalidArgument("throughput needs at least two records".into()));
    }
    let n = records.len();
    let span = records[n - 1].t_start - records[0].t_start;
    let total_energy: f64 = records.iter().map(|r| r.energy).sum();
    let total_period: f64 = records.iter().map(|r| r.period).sum();
    Ok(ThroughputSummary {
        samples: n,
        throughput: (n - 1) as f64 / span,
        mean_period: total_period / n as f64,
        total_energy,
        energy_per_sample: total_energy / n as f64,
        average_power: total_energy / total_period,
    })
}
