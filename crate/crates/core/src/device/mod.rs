//! Compact SOT-MTJ model: bias-dependent material laws, resistance and pulse protocols.

mod calibration;
mod config;
mod protocol;
mod switching;

pub use calibration::{
    calibrate_k_heat, calibrate_theta_sh, chi3_tail_quantile, conversion_threshold, peak_thermal_field,
    PEAK_TAIL_PROBABILITY,
};
pub use config::{DeviceConfig, IC_ANCHOR, K_HEAT_DEFAULT, THETA_SH_DEFAULT};
pub use protocol::{ConversionProtocol, ResetProtocol, SwitchProtocol};
pub use switching::{reset_device, run_waveform, switch_attempt, SimOptions, SwitchOutcome};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::vector::Vector3;

/// Reference-layer magnetization. The free layer is parallel (low resistance) at m = −ẑ.
pub const REFERENCE_DIRECTION: Vector3 = Vector3::new(0.0, 0.0, -1.0);

/// |m_z| a settled state must exceed.
pub const SETTLED_MZ: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MagState {
    P,
    AP,
    Precessional,
}

impl MagState {
    pub fn classify(m: Vector3) -> MagState {
        if m.z.abs() < SETTLED_MZ {
            MagState::Precessional
        } else if m.z > 0.0 {
            MagState::AP
        } else {
            MagState::P
        }
    }

    /// Canonical direction of a settled state.
    pub fn direction(self) -> Option<Vector3> {
        match self {
            MagState::P => Some(REFERENCE_DIRECTION),
            MagState::AP => Some(-REFERENCE_DIRECTION),
            MagState::Precessional => None,
        }
    }
}

impl DeviceConfig {
    /// MTJ resistance for free-layer direction `m`, Ω. Conductance interpolates
    /// between the P and AP values with the cosine to the reference layer.
    pub fn resistance(&self, m: Vector3) -> f64 {
        let c = m.dot(REFERENCE_DIRECTION) / m.norm();
        let g_p = 1.0 / self.r_p;
        let g_ap = 1.0 / self.r_ap();
        1.0 / (g_p * (1.0 + c) / 2.0 + g_ap * (1.0 - c) / 2.0)
    }

    pub fn state_resistance(&self, state: MagState) -> f64 {
        match state {
            MagState::P => self.r_p,
            MagState::AP => self.r_ap(),
            MagState::Precessional => self.resistance(Vector3::X),
        }
    }

    /// Relaxed direction of a settled state at bias `v_b`: the in-plane field tilts m
    /// away from the easy axis by asin(H_x/H_k).
    pub fn equilibrium(&self, state: MagState, v_b: f64) -> Result<Vector3> {
        let hk = self.hk_eff(v_b)?;
        let sign = if state == MagState::AP { 1.0 } else { -1.0 };
        if hk <= self.h_inplane.abs() {
            return Ok(Vector3::new(self.h_inplane.signum(), 0.0, 0.0));
        }
        let mx = self.h_inplane / hk;
        Ok(Vector3::new(mx, 0.0, sign * (1.0 - mx * mx).sqrt()))
    }
}
