use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::device::DeviceConfig;
use crate::error::{Result, SimError};
use crate::llg::field::{standard_normal_vector, Dynamics, ThermalModel};
use crate::llg::{DriveSample, DriveWaveform};
use crate::vector::Vector3;

/// Largest step the integrators accept, s.
pub const MAX_DT: f64 = 2e-12;
/// Pre-renormalization norm drift that aborts a run.
pub const INSTABILITY_DRIFT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Rk4,
    Heun,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub dt: f64,
    /// Scheme for noiseless runs. Runs with thermal noise always use Heun.
    pub scheme: Scheme,
    pub renormalize: bool,
    /// Keep every n-th step in the trajectory; 0 keeps only the endpoints.
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-12, scheme: Scheme::Rk4, renormalize: true, record_every: 1 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= MAX_DT) {
            return Err(SimError::InvalidConfig(format!(
                "dt must be in (0, {MAX_DT:e}] s, got {:e}",
                self.dt
            )));
        }
        Ok(())
    }

    pub fn endpoints_only(self) -> Self {
        Self { record_every: 0, ..self }
    }
}

/// Magnetization direction, clock and the noise stream that drives it.
#[derive(Debug, Clone)]
pub struct MagnetizationState {
    pub m: Vector3,
    pub t: f64,
    pub rng: ChaCha8Rng,
}

impl MagnetizationState {
    pub fn new(m: Vector3, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { m: m.normalized(), t: 0.0, rng }
    }

    pub fn from_rng(m: Vector3, rng: ChaCha8Rng) -> Self {
        Self { m: m.normalized(), t: 0.0, rng }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub m: Vector3,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub steps: u64,
    /// Largest | |m| − 1 | seen before renormalization.
    pub max_norm_drift: f64,
    /// Time of the last sign change of m_z, interpolated within the step.
    pub last_mz_crossing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub stats: TrajectoryStats,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t_s,mx,my,mz")?;
        for p in &self.points {
            writeln!(w, "{:.6e},{:.9},{:.9},{:.9}", p.t, p.m.x, p.m.y, p.m.z)?;
        }
        Ok(())
    }
}

/// Receives the state after every accepted step.
pub trait StepObserver {
    fn observe(&mut self, t: f64, m: Vector3, drive: DriveSample, dt: f64);
}

impl StepObserver for () {
    fn observe(&mut self, _: f64, _: Vector3, _: DriveSample, _: f64) {}
}

/// Advances `state` to `t_end` under `waveform`, recording the trajectory.
pub fn integrate(
    state: &mut MagnetizationState,
    dev: &DeviceConfig,
    waveform: &DriveWaveform,
    cfg: &IntegratorConfig,
    thermal: &ThermalModel,
    t_end: f64,
) -> Result<Trajectory> {
    integrate_observed(state, dev, waveform, cfg, thermal, t_end, &mut ())
}

pub fn integrate_observed<O: StepObserver + ?Sized>(
    state: &mut MagnetizationState,
    dev: &DeviceConfig,
    waveform: &DriveWaveform,
    cfg: &IntegratorConfig,
    thermal: &ThermalModel,
    t_end: f64,
    observer: &mut O,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_end > state.t) {
        return Err(SimError::InvalidArgument(format!(
            "t_end ({t_end:e}) must be after the current time ({:e})",
            state.t
        )));
    }
    let dt = cfg.dt;
    let n_steps = ((t_end - state.t) / dt).round().max(1.0) as u64;
    let scheme = if thermal.enabled { Scheme::Heun } else { cfg.scheme };
    let t_start = state.t;

    let mut traj = Trajectory::default();
    traj.points.push(TrajectoryPoint { t: state.t, m: state.m });

    let mut drive = waveform.sample(state.t + 0.5 * dt);
    let mut dynamics = Dynamics::new(dev, drive, thermal, dt)?;

    for step in 0..n_steps {
        let t = t_start + step as f64 * dt;
        let next_drive = waveform.sample(t + 0.5 * dt);
        if next_drive != drive {
            drive = next_drive;
            dynamics = Dynamics::new(dev, drive, thermal, dt)?;
        }

        let m = state.m;
        let raw = match scheme {
            Scheme::Rk4 => rk4_step(&dynamics, m, dt),
            Scheme::Heun => {
                let h_th = if dynamics.thermal_sigma > 0.0 {
                    standard_normal_vector(&mut state.rng) * dynamics.thermal_sigma
                } else {
                    Vector3::ZERO
                };
                heun_step(&dynamics, m, h_th, dt)
            }
        };

        let t_next = t_start + (step + 1) as f64 * dt;
        let norm = raw.norm();
        let drift = (norm - 1.0).abs();
        if !raw.is_finite() || drift > INSTABILITY_DRIFT {
            return Err(SimError::Instability { t: t_next, drift });
        }
        traj.stats.max_norm_drift = traj.stats.max_norm_drift.max(drift);
        let m_next = if cfg.renormalize { raw / norm } else { raw };

        if (m.z > 0.0) != (m_next.z > 0.0) {
            let frac = m.z / (m.z - m_next.z);
            traj.stats.last_mz_crossing = Some(t + frac * dt);
        }

        state.m = m_next;
        state.t = t_next;
        observer.observe(t_next, m_next, drive, dt);

        let last = step + 1 == n_steps;
        let keep = cfg.record_every > 0 && (step + 1) % cfg.record_every as u64 == 0;
        if keep || last {
            traj.points.push(TrajectoryPoint { t: t_next, m: m_next });
        }
    }
    traj.stats.steps = n_steps;
    Ok(traj)
}

fn rk4_step(d: &Dynamics, m: Vector3, dt: f64) -> Vector3 {
    let z = Vector3::ZERO;
    let k1 = d.rhs(m, z);
    let k2 = d.rhs(m + k1 * (0.5 * dt), z);
    let k3 = d.rhs(m + k2 * (0.5 * dt), z);
    let k4 = d.rhs(m + k3 * dt, z);
    m + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

/// Stratonovich Heun carried out with rotations: each stage turns m about
/// ω = m × dm/dt, so the update stays on the unit sphere. The same noise
/// realisation feeds predictor and corrector.
fn heun_step(d: &Dynamics, m: Vector3, h_th: Vector3, dt: f64) -> Vector3 {
    let w0 = m.cross(d.rhs(m, h_th));
    let predictor = rotate(m, w0 * dt);
    let w1 = predictor.cross(d.rhs(predictor, h_th));
    rotate(m, (w0 + w1) * (0.5 * dt))
}

/// Rodrigues rotation of `v` by the rotation vector `phi`.
fn rotate(v: Vector3, phi: Vector3) -> Vector3 {
    let angle = phi.norm();
    if angle == 0.0 {
        return v;
    }
    let k = phi / angle;
    let (s, c) = angle.sin_cos();
    v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
}
