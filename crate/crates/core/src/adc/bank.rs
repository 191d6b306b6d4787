use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adc::code::{ThermometerCode, N_LEVELS};
use crate::device::{run_waveform, ConversionProtocol, DeviceConfig, MagState, SimOptions, SwitchOutcome};
use crate::error::{Result, SimError};

pub const MIN_WIDTH: f64 = 10e-9;
pub const MAX_WIDTH: f64 = 500e-9;

/// Widths whose zero-bias critical currents form an evenly spaced ladder from
/// `i_min` to `i_max`.
pub fn design_widths(i_min: f64, i_max: f64, n_levels: usize, template: &DeviceConfig) -> Result<Vec<f64>> {
    if !(i_min > 0.0 && i_max > i_min) || n_levels < 2 {
        return Err(SimError::InvalidArgument(format!(
            "need 0 < i_min < i_max and at least two levels, got {i_min:e}, {i_max:e}, {n_levels}"
        )));
    }
    // Ic is linear in width: Ic(w) = w * Ic(1 m).
    let ic_per_metre = template.with_width(1.0).critical_current(0.0)?;
    (0..n_levels)
        .map(|k| {
            let target = i_min + k as f64 * (i_max - i_min) / (n_levels - 1) as f64;
            let width = target / ic_per_metre;
            if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
                return Err(SimError::InfeasibleWidth { level: k, width_nm: width * 1e9 });
            }
            Ok(width)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BankRole {
    Conversion,
    Dummy,
}

/// Seven devices of ascending width sharing one input rail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizerBank {
    pub devices: Vec<DeviceConfig>,
    pub role: BankRole,
    pub states: Vec<MagState>,
    /// Per-device input gain; 1.0 models ideal current replication.
    pub gains: Vec<f64>,
}

/// Result of driving one input through the conversion bank.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantization {
    pub code: ThermometerCode,
    pub outcomes: Vec<SwitchOutcome>,
}

impl QuantizerBank {
    pub fn new(devices: Vec<DeviceConfig>, role: BankRole) -> Result<Self> {
        if devices.len() != N_LEVELS {
            return Err(SimError::InvalidConfig(format!(
                "a bank needs exactly {N_LEVELS} devices, got {}",
                devices.len()
            )));
        }
        if devices.windows(2).any(|w| w[1].w_hm <= w[0].w_hm) {
            return Err(SimError::InvalidConfig("bank widths must be strictly increasing".into()));
        }
        for dev in &devices {
            dev.validate()?;
        }
        Ok(Self { devices, role, states: vec![MagState::P; N_LEVELS], gains: vec![1.0; N_LEVELS] })
    }

    pub fn design(template: &DeviceConfig, i_min: f64, i_max: f64, role: BankRole) -> Result<Self> {
        let widths = design_widths(i_min, i_max, N_LEVELS, template)?;
        Self::new(widths.into_iter().map(|w| template.with_width(w)).collect(), role)
    }

    /// Copy with every width scaled by (1 + sigma_rel·N(0,1)) from a seeded stream.
    pub fn with_width_mismatch(&self, sigma_rel: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let devices = self
            .devices
            .iter()
            .map(|d| {
                let z: f64 = rng.sample(StandardNormal);
                d.with_width(d.w_hm * (1.0 + sigma_rel * z))
            })
            .collect();
        let mut bank = Self::new(devices, self.role)?;
        bank.gains = self.gains.clone();
        Ok(bank)
    }

    pub fn widths(&self) -> Vec<f64> {
        self.devices.iter().map(|d| d.w_hm).collect()
    }

    /// Zero-bias critical currents, A.
    pub fn thresholds(&self) -> Result<Vec<f64>> {
        self.devices.iter().map(|d| d.critical_current(0.0)).collect()
    }

    pub fn all_p(&self) -> bool {
        self.states.iter().all(|&s| s == MagState::P)
    }

    /// Drives `i_in` through every device and latches the hemisphere each one ends in.
    pub fn quantize(
        &mut self,
        i_in: f64,
        protocol: &ConversionProtocol,
        opts: &SimOptions,
        rng: &mut ChaCha8Rng,
    ) -> Result<Quantization> {
        if self.role != BankRole::Conversion || !self.all_p() {
            return Err(SimError::InvalidArgument(
                "quantize needs a conversion-role bank with every device in P".into(),
            ));
        }
        let seeds: Vec<u64> = (0..N_LEVELS).map(|_| rng.next_u64()).collect();
        let outcomes = self
            .devices
            .par_iter()
            .zip(self.gains.par_iter())
            .zip(seeds.par_iter())
            .map(|((dev, &gain), &seed)| {
                let m0 = dev.equilibrium(MagState::P, 0.0)?;
                run_waveform(dev, &protocol.waveform(i_in * gain), m0, opts, ChaCha8Rng::seed_from_u64(seed))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut code = ThermometerCode::default();
        for (k, out) in outcomes.iter().enumerate() {
            let ap = out.final_m.z > 0.0;
            code.bits[k] = ap;
            self.states[k] = if ap { MagState::AP } else { MagState::P };
        }
        Ok(Quantization { code, outcomes })
    }
}

/// Free-function form of [`QuantizerBank::quantize`].
pub fn quantize(
    bank: &mut QuantizerBank,
    i_in: f64,
    protocol: &ConversionProtocol,
    opts: &SimOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Quantization> {
    bank.quantize(i_in, protocol, opts, rng)
}
