use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adc::bank::{BankRole, QuantizerBank};
use crate::adc::code::{thermometer_to_binary, ThermometerCode, N_LEVELS};
use crate::adc::sense::{sense, ComparatorModel};
use crate::device::{reset_device, ConversionProtocol, MagState, ResetProtocol, SimOptions};
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Architecture {
    Conventional,
    Interleaved,
}

impl std::str::FromStr for Architecture {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "conventional" => Ok(Self::Conventional),
            "interleaved" => Ok(Self::Interleaved),
            _ => Err(format!("unknown architecture {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSchedule {
    pub t_convert: f64,
    pub t_sense: f64,
    pub t_reset: f64,
    pub architecture: Architecture,
}

impl PhaseSchedule {
    pub const T_CONVERT: f64 = 2.28e-9;
    pub const T_SENSE: f64 = 1e-9;
    pub const T_RESET: f64 = 1.72e-9;

    pub fn conventional() -> Self {
        Self {
            t_convert: Self::T_CONVERT,
            t_sense: Self::T_SENSE,
            t_reset: Self::T_RESET,
            architecture: Architecture::Conventional,
        }
    }

    pub fn interleaved() -> Self {
        Self { architecture: Architecture::Interleaved, ..Self::conventional() }
    }

    pub fn for_architecture(architecture: Architecture) -> Self {
        match architecture {
            Architecture::Conventional => Self::conventional(),
            Architecture::Interleaved => Self::interleaved(),
        }
    }

    /// Sample period; the interleaved reset hides under the other bank's conversion.
    pub fn period(&self) -> f64 {
        match self.architecture {
            Architecture::Conventional => self.t_convert + self.t_sense + self.t_reset,
            Architecture::Interleaved => self.t_convert + self.t_sense,
        }
    }

    /// Time from sample start to a valid output code.
    pub fn latency(&self) -> f64 {
        self.t_convert + self.t_sense
    }

    /// Window the reset pulse must fit in. Interleaved resets must finish before the
    /// other bank is sensed against them.
    pub fn reset_window(&self) -> f64 {
        match self.architecture {
            Architecture::Conventional => self.t_reset,
            Architecture::Interleaved => self.t_convert,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("t_convert", self.t_convert), ("t_sense", self.t_sense), ("t_reset", self.t_reset)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(SimError::InvalidConfig(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.period() <= 0.0 {
            return Err(SimError::InvalidConfig("schedule period must be positive".into()));
        }
        Ok(())
    }
}

/// Everything besides the banks and schedule that a pipeline run needs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub conversion: ConversionProtocol,
    pub reset: ResetProtocol,
    pub comparator: ComparatorModel,
    pub sim: SimOptions,
    pub seed: u64,
}

impl PipelineConfig {
    fn check_fits(&self, schedule: &PhaseSchedule) -> Result<()> {
        schedule.validate()?;
        let slack = 1e-18;
        if self.conversion.duration() > schedule.t_convert + slack {
            return Err(SimError::InvalidConfig(format!(
                "conversion protocol ({:e} s) exceeds t_convert ({:e} s)",
                self.conversion.duration(),
                schedule.t_convert
            )));
        }
        if self.reset.duration() > schedule.reset_window() + slack {
            return Err(SimError::InvalidConfig(format!(
                "reset protocol ({:e} s) exceeds its {:e} s window",
                self.reset.duration(),
                schedule.reset_window()
            )));
        }
        Ok(())
    }

    fn stream(&self, sample: usize, purpose: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample as u64 * 4 + purpose);
        rng
    }
}

/// Energy per sample, J.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub conversion_sot: f64,
    pub conversion_stt: f64,
    pub reset: f64,
    pub read: f64,
    pub comparator: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.conversion_sot + self.conversion_stt + self.reset + self.read + self.comparator
    }
}

/// I²·R·t.
pub fn conduction_energy(current: f64, resistance: f64, duration: f64) -> f64 {
    current * current * resistance * duration
}

/// Energy of one 7-bit sense: read current through each conversion/dummy pair plus one
/// comparator decision per bit.
pub fn sense_energy(comparator: &ComparatorModel, pairs: &[(f64, f64)], t_sense: f64) -> (f64, f64) {
    let read = pairs
        .iter()
        .map(|&(r_conv, r_dummy)| conduction_energy(comparator.read_current, r_conv + r_dummy, t_sense))
        .sum();
    (read, comparator.energy_per_decision * pairs.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Anomaly {
    Bubble,
    Metastable { bit: usize },
    /// The bank sensed as dummy was not fully reset.
    RoleViolation { bit: usize },
    ResetFailed { bit: usize, mz: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionRecord {
    pub index: usize,
    pub t_start: f64,
    pub period: f64,
    pub input: f64,
    pub thermo: ThermometerCode,
    /// Code latched by the conversion bank before sensing.
    pub latched: ThermometerCode,
    pub binary: u8,
    pub bubble: bool,
    pub phase_times: BTreeMap<String, f64>,
    pub energy_breakdown: EnergyBreakdown,
    pub energy: f64,
    pub errors: Vec<Anomaly>,
}

impl ConversionRecord {
    pub fn csv_header() -> &'static str {
        "index,t_start_s,input_A,thermo,binary,bubbles,energy_J"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6e},{:.9e},{},{},{},{:.6e}",
            self.index,
            self.t_start,
            self.input,
            self.thermo,
            self.binary,
            u8::from(self.bubble),
            self.energy
        )
    }
}

/// Quantizes `input` on `conv`, then senses it against `dummy`.
fn convert_and_sense(
    index: usize,
    input: f64,
    conv: &mut QuantizerBank,
    dummy: &QuantizerBank,
    schedule: &PhaseSchedule,
    cfg: &PipelineConfig,
    errors: &mut Vec<Anomaly>,
    energy: &mut EnergyBreakdown,
) -> Result<(ThermometerCode, ThermometerCode)> {
    let q = conv.quantize(input, &cfg.conversion, &cfg.sim, &mut cfg.stream(index, 0))?;
    energy.conversion_sot += q.outcomes.iter().map(|o| o.sot_energy).sum::<f64>();
    energy.conversion_stt += q.outcomes.iter().map(|o| o.stt_energy).sum::<f64>();

    let mut rng = cfg.stream(index, 1);
    let mut thermo = ThermometerCode::default();
    let mut pairs = Vec::with_capacity(N_LEVELS);
    for k in 0..N_LEVELS {
        if dummy.states[k] != MagState::P {
            errors.push(Anomaly::RoleViolation { bit: k });
        }
        let r_conv = conv.devices[k].state_resistance(conv.states[k]);
        let r_dummy = dummy.devices[k].state_resistance(dummy.states[k]);
        let s = sense(r_conv, r_dummy, &cfg.comparator, &mut rng);
        if s.metastable && cfg.comparator.sigma > 0.0 {
            errors.push(Anomaly::Metastable { bit: k });
        }
        thermo.bits[k] = s.bit;
        pairs.push((r_conv, r_dummy));
    }
    let (read, comparator) = sense_energy(&cfg.comparator, &pairs, schedule.t_sense);
    energy.read += read;
    energy.comparator += comparator;
    Ok((thermo, q.code))
}

/// Resets every AP device of `bank`. Failures are returned per bit instead of aborting.
fn reset_bank(
    bank: &mut QuantizerBank,
    cfg: &PipelineConfig,
    index: usize,
    purpose: u64,
) -> Result<(f64, Vec<(usize, f64)>)> {
    let mut rng = cfg.stream(index, purpose);
    let opts = SimOptions { keep_trajectory: false, ..cfg.sim };
    let mut energy = 0.0;
    let mut failures = Vec::new();
    for k in 0..N_LEVELS {
        if bank.states[k] == MagState::P {
            continue;
        }
        let dev = &bank.devices[k];
        let m = bank.states[k].direction().unwrap_or(crate::vector::Vector3::X);
        let seed = rand::RngCore::next_u64(&mut rng);
        match reset_device(dev, m, &cfg.reset, &opts, ChaCha8Rng::seed_from_u64(seed)) {
            Ok(out) => {
                energy += out.energy;
                bank.states[k] = MagState::P;
            }
            Err(SimError::ResetFailed { mz }) => {
                energy += conduction_energy(cfg.reset.current(dev)?, dev.r_hm(), cfg.reset.sot_duration);
                failures.push((k, mz));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((energy, failures))
}

fn finish_record(
    index: usize,
    input: f64,
    schedule: &PhaseSchedule,
    thermo: ThermometerCode,
    latched: ThermometerCode,
    phase_times: BTreeMap<String, f64>,
    energy_breakdown: EnergyBreakdown,
    mut errors: Vec<Anomaly>,
) -> ConversionRecord {
    let bin = thermometer_to_binary(&thermo);
    if bin.bubble {
        errors.push(Anomaly::Bubble);
    }
    ConversionRecord {
        index,
        t_start: index as f64 * schedule.period(),
        period: schedule.period(),
        input,
        thermo,
        latched,
        binary: bin.value,
        bubble: bin.bubble,
        phase_times,
        energy: energy_breakdown.total(),
        energy_breakdown,
        errors,
    }
}

/// Convert, sense, reset on one conversion bank against a permanent dummy bank.
pub fn run_conventional(
    samples: &[f64],
    conv: &mut QuantizerBank,
    dummy: &QuantizerBank,
    schedule: &PhaseSchedule,
    cfg: &PipelineConfig,
) -> Result<Vec<ConversionRecord>> {
    if schedule.architecture != Architecture::Conventional {
        return Err(SimError::InvalidArgument("run_conventional needs a conventional schedule".into()));
    }
    cfg.check_fits(schedule)?;
    conv.role = BankRole::Conversion;
    let mut records = Vec::with_capacity(samples.len());
    for (n, &input) in samples.iter().enumerate() {
        let mut errors = Vec::new();
        let mut energy = EnergyBreakdown::default();
        let (thermo, latched) = convert_and_sense(n, input, conv, dummy, schedule, cfg, &mut errors, &mut energy)?;
        let (reset_energy, failures) = reset_bank(conv, cfg, n, 2)?;
        if let Some(&(_, mz)) = failures.first() {
            return Err(SimError::ResetFailed { mz });
        }
        energy.reset = reset_energy;
        let phase_times = BTreeMap::from([
            ("convert".to_string(), schedule.t_convert),
            ("sense".to_string(), schedule.t_sense),
            ("reset".to_string(), schedule.t_reset),
        ]);
        records.push(finish_record(n, input, schedule, thermo, latched, phase_times, energy, errors));
    }
    Ok(records)
}

/// Two banks swap conversion and dummy roles every sample; the bank that converted
/// the previous sample is reset while the other converts.
pub fn run_interleaved(
    samples: &[f64],
    bank_a: &mut QuantizerBank,
    bank_b: &mut QuantizerBank,
    schedule: &PhaseSchedule,
    cfg: &PipelineConfig,
) -> Result<Vec<ConversionRecord>> {
    if schedule.architecture != Architecture::Interleaved {
        return Err(SimError::InvalidArgument("run_interleaved needs an interleaved schedule".into()));
    }
    cfg.check_fits(schedule)?;
    let mut records = Vec::with_capacity(samples.len());
    for (n, &input) in samples.iter().enumerate() {
        let (conv, other) = if n % 2 == 0 { (&mut *bank_a, &mut *bank_b) } else { (&mut *bank_b, &mut *bank_a) };
        conv.role = BankRole::Conversion;
        other.role = BankRole::Dummy;

        let mut errors = Vec::new();
        let mut energy = EnergyBreakdown::default();
        let mut phase_times = BTreeMap::from([
            ("convert".to_string(), schedule.t_convert),
            ("sense".to_string(), schedule.t_sense),
        ]);
        if n > 0 {
            let (reset_energy, failures) = reset_bank(other, cfg, n, 2)?;
            energy.reset = reset_energy;
            for (bit, mz) in failures {
                errors.push(Anomaly::ResetFailed { bit, mz });
            }
            phase_times.insert("reset_overlapped".to_string(), cfg.reset.duration());
        }
        if !conv.all_p() {
            // A reset that failed while this bank was the dummy gets one more attempt.
            let (retry_energy, failures) = reset_bank(conv, cfg, n, 3)?;
            energy.reset += retry_energy;
            if let Some(&(_, mz)) = failures.first() {
                return Err(SimError::ResetFailed { mz });
            }
        }
        let (thermo, latched) = convert_and_sense(n, input, conv, other, schedule, cfg, &mut errors, &mut energy)?;
        records.push(finish_record(n, input, schedule, thermo, latched, phase_times, energy, errors));
    }
    Ok(records)
}
