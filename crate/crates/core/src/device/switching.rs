use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::device::{DeviceConfig, MagState, ResetProtocol, SwitchProtocol};
use crate::error::{Result, SimError};
use crate::llg::{
    integrate_observed, DriveSample, DriveWaveform, IntegratorConfig, MagnetizationState, StepObserver,
    ThermalModel, Trajectory,
};
use crate::vector::Vector3;

/// Integration and noise settings shared by every device run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimOptions {
    pub integrator: IntegratorConfig,
    pub thermal: ThermalModel,
    pub keep_trajectory: bool,
}

impl SimOptions {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn thermal(temperature: f64) -> Self {
        Self { thermal: ThermalModel::at(temperature), ..Self::default() }
    }

    pub fn with_trajectory(self) -> Self {
        Self { keep_trajectory: true, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchOutcome {
    pub switched: bool,
    /// Time of the last m_z zero crossing, s.
    pub switch_time: Option<f64>,
    pub initial_state: MagState,
    pub final_state: MagState,
    pub final_m: Vector3,
    pub trajectory: Option<Trajectory>,
    /// Heavy-metal conduction energy, J.
    pub sot_energy: f64,
    /// Stack conduction energy from the bias/STT current, J.
    pub stt_energy: f64,
    pub energy: f64,
    pub max_norm_drift: f64,
}

struct StackEnergy<'a> {
    dev: &'a DeviceConfig,
    joules: f64,
}

impl StepObserver for StackEnergy<'_> {
    fn observe(&mut self, _: f64, m: Vector3, drive: DriveSample, dt: f64) {
        if drive.i_stt != 0.0 {
            self.joules += drive.i_stt * drive.i_stt * self.dev.resistance(m) * dt;
        }
    }
}

/// I²·R_HM·t summed over the waveform's segments, J.
pub(crate) fn sot_energy(dev: &DeviceConfig, waveform: &DriveWaveform) -> f64 {
    let r_hm = dev.r_hm();
    waveform
        .segments
        .iter()
        .map(|s| s.drive.i_sot * s.drive.i_sot * r_hm * s.duration)
        .sum()
}

/// Runs `waveform` from `m0` and classifies the end state.
pub fn run_waveform(
    dev: &DeviceConfig,
    waveform: &DriveWaveform,
    m0: Vector3,
    opts: &SimOptions,
    rng: ChaCha8Rng,
) -> Result<SwitchOutcome> {
    let mut state = MagnetizationState::from_rng(m0, rng);
    let cfg = if opts.keep_trajectory { opts.integrator } else { opts.integrator.endpoints_only() };
    let mut meter = StackEnergy { dev, joules: 0.0 };
    let traj = integrate_observed(&mut state, dev, waveform, &cfg, &opts.thermal, waveform.duration(), &mut meter)?;

    let initial_state = MagState::classify(m0);
    let final_state = MagState::classify(state.m);
    let sot = sot_energy(dev, waveform);
    let switched = final_state != MagState::Precessional && (m0.z > 0.0) != (state.m.z > 0.0);
    Ok(SwitchOutcome {
        switched,
        switch_time: traj.stats.last_mz_crossing,
        initial_state,
        final_state,
        final_m: state.m,
        max_norm_drift: traj.stats.max_norm_drift,
        trajectory: opts.keep_trajectory.then_some(traj),
        sot_energy: sot,
        stt_energy: meter.joules,
        energy: sot + meter.joules,
    })
}

/// One write attempt from the relaxed P state.
pub fn switch_attempt(
    dev: &DeviceConfig,
    i_sot: f64,
    v_bias: f64,
    protocol: &SwitchProtocol,
    opts: &SimOptions,
    rng: ChaCha8Rng,
) -> Result<SwitchOutcome> {
    let m0 = dev.equilibrium(MagState::P, 0.0)?;
    run_waveform(dev, &protocol.waveform(i_sot, v_bias), m0, opts, rng)
}

/// Returns a device at `m` to P. A device already in P is left untouched.
pub fn reset_device(
    dev: &DeviceConfig,
    m: Vector3,
    protocol: &ResetProtocol,
    opts: &SimOptions,
    rng: ChaCha8Rng,
) -> Result<SwitchOutcome> {
    if MagState::classify(m) == MagState::P {
        return Ok(SwitchOutcome {
            switched: false,
            switch_time: None,
            initial_state: MagState::P,
            final_state: MagState::P,
            final_m: m,
            trajectory: None,
            sot_energy: 0.0,
            stt_energy: 0.0,
            energy: 0.0,
            max_norm_drift: 0.0,
        });
    }
    let outcome = run_waveform(dev, &protocol.waveform(dev)?, m, opts, rng)?;
    if outcome.final_state != MagState::P {
        return Err(SimError::ResetFailed { mz: outcome.final_m.z });
    }
    Ok(outcome)
}
