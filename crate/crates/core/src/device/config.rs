use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, MU0, OERSTED, Q};
use crate::error::{Result, SimError};

/// Spin-Hall angle that puts the 50 nm device's conversion threshold at exactly 20 µA
/// under the default conversion protocol. Re-derived by `calibrate_theta_sh`.
pub const THETA_SH_DEFAULT: f64 = 0.311_147_366_452_987_5;

/// Joule-heating coefficient that makes the peak thermal field reach 2.5 kOe at |V| = 1 V.
/// Re-derived by `calibrate_k_heat`.
pub const K_HEAT_DEFAULT: f64 = 48.474_054_728_564_38;

/// Critical current the 50 nm, zero-bias device is calibrated to.
pub const IC_ANCHOR: f64 = 20e-6;

/// Parameters of a single SOT-MTJ. All quantities in SI units.
///
/// Missing fields in a config file fall back to the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceConfig {
    pub t_fl: f64,
    pub t_ox: f64,
    pub t_hm: f64,
    pub w_hm: f64,
    pub diameter: f64,
    pub ms0: f64,
    pub ki0: f64,
    pub alpha: f64,
    pub xi_vcma: f64,
    pub t0: f64,
    pub tc: f64,
    pub k_heat: f64,
    pub eta_fit: f64,
    pub xi_bloch: f64,
    pub eta_bloch: f64,
    pub theta_sh: f64,
    pub eta_stt: f64,
    pub tmr0: f64,
    pub r_p: f64,
    /// In-plane bias field along x, A/m.
    pub h_inplane: f64,
    /// Heavy-metal resistivity, Ω·m.
    pub hm_resistivity: f64,
    /// Heavy-metal strip length between the current terminals, m.
    pub hm_length: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        let mut dev = DeviceConfig {
            t_fl: 1.1e-9,
            t_ox: 1.4e-9,
            t_hm: 3e-9,
            w_hm: 50e-9,
            diameter: 50e-9,
            ms0: 6.25e5,
            ki0: 3.2e-4,
            alpha: 0.05,
            xi_vcma: 60e-15,
            t0: 300.0,
            tc: 750.0,
            k_heat: K_HEAT_DEFAULT,
            eta_fit: 1.0,
            xi_bloch: 1.5,
            eta_bloch: 2.2,
            theta_sh: THETA_SH_DEFAULT,
            eta_stt: 0.6,
            tmr0: 1.75,
            r_p: 2e3,
            h_inplane: -40.0 * OERSTED,
            hm_resistivity: 2e-6,
            hm_length: 4e-6,
        };
        dev.eta_fit = dev
            .calibrated_eta_fit(IC_ANCHOR)
            .expect("default device parameters are valid");
        dev
    }
}

impl DeviceConfig {
    pub fn with_width(&self, w_hm: f64) -> DeviceConfig {
        DeviceConfig { w_hm, ..self.clone() }
    }

    /// Junction area, m².
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.diameter * self.diameter / 4.0
    }

    /// Free-layer volume, m³.
    pub fn volume(&self) -> f64 {
        self.area() * self.t_fl
    }

    /// Antiparallel resistance, Ω.
    pub fn r_ap(&self) -> f64 {
        self.r_p * (1.0 + self.tmr0)
    }

    /// Heavy-metal strip resistance seen by the SOT current, Ω.
    pub fn r_hm(&self) -> f64 {
        self.hm_resistivity * self.hm_length / (self.w_hm * self.t_hm)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("t_fl", self.t_fl),
            ("t_ox", self.t_ox),
            ("t_hm", self.t_hm),
            ("w_hm", self.w_hm),
            ("diameter", self.diameter),
            ("ms0", self.ms0),
            ("ki0", self.ki0),
            ("tc", self.tc),
            ("eta_fit", self.eta_fit),
            ("xi_bloch", self.xi_bloch),
            ("eta_bloch", self.eta_bloch),
            ("r_p", self.r_p),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(SimError::InvalidConfig(format!("{name} must be positive, got {value}")));
            }
        }
        let nonnegative = [
            ("alpha", self.alpha),
            ("t0", self.t0),
            ("k_heat", self.k_heat),
            ("tmr0", self.tmr0),
            ("xi_vcma", self.xi_vcma),
            ("eta_stt", self.eta_stt),
            ("hm_resistivity", self.hm_resistivity),
            ("hm_length", self.hm_length),
        ];
        for (name, value) in nonnegative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(SimError::InvalidConfig(format!("{name} must be non-negative, got {value}")));
            }
        }
        if !self.theta_sh.is_finite() || !self.h_inplane.is_finite() {
            return Err(SimError::InvalidConfig("theta_sh and h_inplane must be finite".into()));
        }
        if self.t0 >= self.tc {
            return Err(SimError::InvalidConfig(format!(
                "t0 ({}) must be below tc ({})",
                self.t0, self.tc
            )));
        }
        Ok(())
    }

    /// Fitting factor that makes `critical_current(0.0)` equal `target`.
    ///
    /// The critical-current law is linear in 1/eta, so this is exact.
    pub fn calibrated_eta_fit(&self, target: f64) -> Result<f64> {
        let unit = DeviceConfig { eta_fit: 1.0, ..self.clone() };
        Ok(unit.critical_current(0.0)? / target)
    }

    /// Effective junction temperature under bias, K.
    pub fn effective_temperature(&self, v_b: f64) -> f64 {
        self.t0 + self.k_heat * v_b * v_b
    }

    fn bloch_factor(&self, v_b: f64) -> Result<f64> {
        let temperature = self.effective_temperature(v_b);
        if temperature >= self.tc {
            return Err(SimError::AboveCurie { v_bias: v_b, temperature });
        }
        Ok(1.0 - (temperature / self.tc).powf(self.xi_bloch))
    }

    /// Saturation magnetization at bias, A/m.
    pub fn ms_of_bias(&self, v_b: f64) -> Result<f64> {
        Ok(self.ms0 * self.bloch_factor(v_b)?)
    }

    /// Interfacial anisotropy at bias, J/m².
    pub fn ki_of_bias(&self, v_b: f64) -> Result<f64> {
        Ok(self.ki0 * self.bloch_factor(v_b)?.powf(self.eta_bloch))
    }

    /// Interfacial anisotropy after the linear voltage-controlled reduction, J/m².
    pub fn ki_eff(&self, v_b: f64) -> Result<f64> {
        Ok(self.ki_of_bias(v_b)? - self.xi_vcma * v_b / self.t_ox)
    }

    /// Effective perpendicular anisotropy field (anisotropy minus demag), A/m.
    pub fn hk_eff(&self, v_b: f64) -> Result<f64> {
        let ms = self.ms_of_bias(v_b)?;
        Ok(2.0 * self.ki_eff(v_b)? / (MU0 * ms * self.t_fl) - ms)
    }

    /// Thermal stability factor in units of k_B·T.
    ///
    /// E_b(0) = Ki0·A with the thin-film demag correction omitted; the bias term
    /// lowers it by ξ·A·V/t_ox.
    pub fn barrier_of_bias(&self, v_b: f64, temperature: f64) -> f64 {
        let area = self.area();
        let eb = self.ki0 * area - self.xi_vcma * area * v_b / self.t_ox;
        eb / (crate::constants::KB * temperature)
    }

    /// SOT critical current at bias, A. Linear in `w_hm`.
    pub fn critical_current(&self, v_b: f64) -> Result<f64> {
        let ms = self.ms_of_bias(v_b)?;
        let ki = self.ki_of_bias(v_b)?;
        Ok(Q * MU0 * self.t_fl * ms * ki * self.t_hm * self.w_hm / (HBAR * self.xi_vcma * self.eta_fit))
    }
}
