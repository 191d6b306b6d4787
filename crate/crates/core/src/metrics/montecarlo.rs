use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::device::{switch_attempt, DeviceConfig, MagState, SimOptions, SwitchProtocol};
use crate::error::{Result, SimError};
use crate::llg::ThermalModel;

pub const Z95: f64 = 1.959_963_984_540_054;

/// Random stream of one Monte Carlo trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if k == 0.0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub trials: usize,
    pub errors: usize,
    pub error_rate: f64,
    pub seed: u64,
    /// 95% Wilson interval on the error rate.
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub reference_state: MagState,
    pub final_p: usize,
    pub final_ap: usize,
    pub final_precessional: usize,
    pub i_sot: f64,
    pub v_bias: f64,
    pub temperature: f64,
}

impl MonteCarloReport {
    pub fn interval_contains(&self, rate: f64) -> bool {
        self.wilson_low <= rate && rate <= self.wilson_high
    }
}

/// Seeded noisy switch attempts. A trial counts as an error when its final state
/// differs from the noiseless run with the same drive.
pub fn monte_carlo_switching(
    dev: &DeviceConfig,
    i_sot: f64,
    v_bias: f64,
    protocol: &SwitchProtocol,
    opts: &SimOptions,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(SimError::InvalidArgument("trials must be at least 1".into()));
    }
    let quiet = SimOptions { thermal: ThermalModel::OFF, keep_trajectory: false, ..*opts };
    let reference = switch_attempt(dev, i_sot, v_bias, protocol, &quiet, ChaCha8Rng::seed_from_u64(seed))?;
    let noisy = SimOptions { keep_trajectory: false, ..*opts };

    let finals = (0..trials)
        .into_par_iter()
        .map(|trial| {
            switch_attempt(dev, i_sot, v_bias, protocol, &noisy, trial_rng(seed, trial as u64)).map(|o| o.final_state)
        })
        .collect::<Result<Vec<_>>>()?;

    let count = |s: MagState| finals.iter().filter(|&&f| f == s).count();
    let errors = finals.iter().filter(|&&f| f != reference.final_state).count();
    let (wilson_low, wilson_high) = wilson_interval(errors, trials, Z95);
    Ok(MonteCarloReport {
        trials,
        errors,
        error_rate: errors as f64 / trials as f64,
        seed,
        wilson_low,
        wilson_high,
        reference_state: reference.final_state,
        final_p: count(MagState::P),
        final_ap: count(MagState::AP),
        final_precessional: count(MagState::Precessional),
        i_sot,
        v_bias,
        temperature: if opts.thermal.enabled { opts.thermal.temperature } else { 0.0 },
    })
}
