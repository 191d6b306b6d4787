use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::constants::{GAMMA0, HBAR, KB, MU0, Q};
use crate::device::DeviceConfig;
use crate::error::Result;
use crate::llg::DriveSample;
use crate::vector::Vector3;

/// Spin polarization injected by a positive heavy-metal current.
pub const SOT_POLARIZATION: Vector3 = Vector3::new(0.0, -1.0, 0.0);
/// Spin polarization of a positive stack current (toward AP).
pub const STT_POLARIZATION: Vector3 = Vector3::new(0.0, 0.0, 1.0);

/// Effective field components, A/m.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EffectiveField {
    pub h_pma: Vector3,
    pub h_vcma: Vector3,
    pub h_demag: Vector3,
    pub h_inplane: Vector3,
    pub h_thermal: Vector3,
}

impl EffectiveField {
    pub fn total(&self) -> Vector3 {
        self.h_pma + self.h_vcma + self.h_demag + self.h_inplane + self.h_thermal
    }
}

/// Spin torques as rates, 1/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TorqueTerms {
    pub tau_stt: Vector3,
    pub tau_sot: Vector3,
}

impl TorqueTerms {
    pub fn total(&self) -> Vector3 {
        self.tau_stt + self.tau_sot
    }
}

/// Thermal noise settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermalModel {
    pub enabled: bool,
    /// Ambient temperature, K.
    pub temperature: f64,
    /// Add the bias-induced Joule heating k_heat·V² to the noise temperature.
    pub bias_heating: bool,
}

impl Default for ThermalModel {
    fn default() -> Self {
        Self { enabled: false, temperature: 300.0, bias_heating: true }
    }
}

impl ThermalModel {
    pub const OFF: ThermalModel = ThermalModel { enabled: false, temperature: 300.0, bias_heating: true };

    pub fn at(temperature: f64) -> Self {
        Self { enabled: true, temperature, bias_heating: true }
    }

    /// Noise temperature under the given bias, K. Zero when disabled or when the
    /// ambient temperature is zero.
    pub fn noise_temperature(&self, dev: &DeviceConfig, v_b: f64) -> f64 {
        if !self.enabled || self.temperature <= 0.0 {
            return 0.0;
        }
        let heating = if self.bias_heating { dev.k_heat * v_b * v_b } else { 0.0 };
        self.temperature + heating
    }
}

/// Per-component standard deviation of the thermal field, A/m.
pub fn thermal_sigma(dev: &DeviceConfig, temperature: f64, ms: f64, dt: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    (2.0 * dev.alpha * KB * temperature / (GAMMA0 * MU0 * ms * dev.volume() * dt)).sqrt()
}

/// Draws one thermal field vector for a device at `temperature` with Ms taken at `v_b`.
pub fn sample_thermal_field<R: Rng + ?Sized>(
    dev: &DeviceConfig,
    temperature: f64,
    v_b: f64,
    dt: f64,
    rng: &mut R,
) -> Result<Vector3> {
    if temperature <= 0.0 {
        return Ok(Vector3::ZERO);
    }
    let sigma = thermal_sigma(dev, temperature, dev.ms_of_bias(v_b)?, dt);
    Ok(standard_normal_vector(rng) * sigma)
}

pub(crate) fn standard_normal_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3 {
    Vector3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Field and torque coefficients for one constant drive. Rebuilt whenever the drive changes.
#[derive(Debug, Clone, Copy)]
pub struct Dynamics {
    pub ms: f64,
    pma: f64,
    vcma: f64,
    inplane: Vector3,
    sot_rate: f64,
    stt_rate: f64,
    pub alpha: f64,
    /// Thermal field standard deviation for the step this was built for, A/m.
    pub thermal_sigma: f64,
}

impl Dynamics {
    pub fn new(dev: &DeviceConfig, drive: DriveSample, thermal: &ThermalModel, dt: f64) -> Result<Self> {
        dev.validate()?;
        let v = drive.v_bias;
        let ms = dev.ms_of_bias(v)?;
        let ki = dev.ki_of_bias(v)?;
        let scale = MU0 * ms * dev.t_fl;
        let j_hm = drive.i_sot / (dev.w_hm * dev.t_hm);
        let j_mtj = drive.i_stt / dev.area();
        let spin = HBAR / (2.0 * Q * MU0 * ms * dev.t_fl);
        let temperature = thermal.noise_temperature(dev, v);
        Ok(Dynamics {
            ms,
            pma: 2.0 * ki / scale,
            vcma: -2.0 * dev.xi_vcma * v / (dev.t_ox * scale),
            inplane: Vector3::new(dev.h_inplane, 0.0, 0.0),
            sot_rate: GAMMA0 * spin * dev.theta_sh * j_hm,
            stt_rate: GAMMA0 * spin * dev.eta_stt * j_mtj,
            alpha: dev.alpha,
            thermal_sigma: thermal_sigma(dev, temperature, ms, dt),
        })
    }

    pub fn field(&self, m: Vector3, h_thermal: Vector3) -> EffectiveField {
        EffectiveField {
            h_pma: Vector3::new(0.0, 0.0, self.pma * m.z),
            h_vcma: Vector3::new(0.0, 0.0, self.vcma * m.z),
            h_demag: Vector3::new(0.0, 0.0, -self.ms * m.z),
            h_inplane: self.inplane,
            h_thermal,
        }
    }

    pub fn torques(&self, m: Vector3) -> TorqueTerms {
        TorqueTerms {
            tau_sot: m.cross(SOT_POLARIZATION.cross(m)) * self.sot_rate,
            tau_stt: m.cross(STT_POLARIZATION.cross(m)) * self.stt_rate,
        }
    }

    #[inline]
    pub fn rhs(&self, m: Vector3, h_thermal: Vector3) -> Vector3 {
        llg_rhs(m, self.field(m, h_thermal).total(), &self.torques(m), self.alpha)
    }
}

/// Explicit Landau–Lifshitz form of the Gilbert equation with damping-like torques:
/// dm/dt = (A + α·m×A)/(1+α²), A = −γ0·m×H + τ.
pub fn llg_rhs(m: Vector3, h_eff: Vector3, tau: &TorqueTerms, alpha: f64) -> Vector3 {
    let a = m.cross(h_eff) * (-GAMMA0) + tau.total();
    (a + m.cross(a) * alpha) / (1.0 + alpha * alpha)
}

/// Field components acting on `m` under `drive`, with a fresh thermal draw when enabled.
pub fn assemble_effective_field<R: Rng + ?Sized>(
    m: Vector3,
    dev: &DeviceConfig,
    drive: DriveSample,
    thermal: &ThermalModel,
    dt: f64,
    rng: &mut R,
) -> Result<EffectiveField> {
    let dynamics = Dynamics::new(dev, drive, thermal, dt)?;
    let h_th = if dynamics.thermal_sigma > 0.0 {
        standard_normal_vector(rng) * dynamics.thermal_sigma
    } else {
        Vector3::ZERO
    };
    Ok(dynamics.field(m, h_th))
}

pub fn compute_torques(m: Vector3, dev: &DeviceConfig, drive: DriveSample) -> Result<TorqueTerms> {
    Ok(Dynamics::new(dev, drive, &ThermalModel::OFF, 1e-12)?.torques(m))
}
