use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constants::OERSTED;
use crate::device::{run_waveform, ConversionProtocol, DeviceConfig, MagState, SimOptions};
use crate::error::{Result, SimError};
use crate::llg::thermal_sigma;

/// Per-draw probability that defines the "peak" thermal field: the magnitude a
/// 10 ns trace at 1 ps steps exceeds about once.
pub const PEAK_TAIL_PROBABILITY: f64 = 1e-4;

fn bisect<F: FnMut(f64) -> Result<bool>>(mut lo: f64, mut hi: f64, rel_tol: f64, mut above: F) -> Result<f64> {
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Survival function of the magnitude of a 3D standard normal vector.
fn chi3_survival(x: f64) -> f64 {
    libm::erfc(x / std::f64::consts::SQRT_2)
        + (2.0 / std::f64::consts::PI).sqrt() * x * (-0.5 * x * x).exp()
}

/// Magnitude exceeded with probability `p` by a 3D standard normal vector.
pub fn chi3_tail_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi3_survival(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Peak thermal-field magnitude at bias `v_b` including Joule heating, A/m.
pub fn peak_thermal_field(dev: &DeviceConfig, v_b: f64, dt: f64, tail_probability: f64) -> Result<f64> {
    let temperature = dev.effective_temperature(v_b);
    let sigma = thermal_sigma(dev, temperature, dev.ms_of_bias(v_b)?, dt);
    Ok(chi3_tail_quantile(tail_probability) * sigma)
}

/// Heating coefficient that makes the peak thermal field equal `target_oe` at bias `v_b`.
pub fn calibrate_k_heat(dev: &DeviceConfig, target_oe: f64, v_b: f64, dt: f64) -> Result<f64> {
    let k_max = (dev.tc - dev.t0) / (v_b * v_b);
    let target = target_oe * OERSTED;
    let with_k = |k: f64| DeviceConfig { k_heat: k, ..dev.clone() };
    if peak_thermal_field(&with_k(0.0), v_b, dt, PEAK_TAIL_PROBABILITY)? > target {
        return Err(SimError::InvalidArgument("target peak is below the unheated field".into()));
    }
    bisect(0.0, k_max * (1.0 - 1e-12), 1e-14, |k| {
        Ok(peak_thermal_field(&with_k(k), v_b, dt, PEAK_TAIL_PROBABILITY)? > target)
    })
}

/// Smallest input current that leaves the device in the AP hemisphere after the
/// noiseless conversion protocol, found by bisection in `[lo, hi]`.
pub fn conversion_threshold(
    dev: &DeviceConfig,
    protocol: &ConversionProtocol,
    opts: &SimOptions,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    let m0 = dev.equilibrium(MagState::P, 0.0)?;
    let noiseless = SimOptions { thermal: crate::llg::ThermalModel::OFF, keep_trajectory: false, ..*opts };
    let flips = |i: f64| -> Result<bool> {
        let out = run_waveform(dev, &protocol.waveform(i), m0, &noiseless, ChaCha8Rng::seed_from_u64(0))?;
        Ok(out.final_m.z > 0.0)
    };
    if flips(lo)? || !flips(hi)? {
        return Err(SimError::InvalidArgument(format!(
            "conversion threshold not bracketed by [{lo:e}, {hi:e}] A"
        )));
    }
    bisect(lo, hi, rel_tol, flips)
}

/// Spin-Hall angle that puts the conversion threshold of `dev` at `target`.
///
/// The dynamics depend on θ_SH·I only, so the threshold scales as 1/θ_SH.
pub fn calibrate_theta_sh(
    dev: &DeviceConfig,
    protocol: &ConversionProtocol,
    opts: &SimOptions,
    target: f64,
) -> Result<f64> {
    let threshold = conversion_threshold(dev, protocol, opts, 0.1 * target, 10.0 * target, 1e-13)?;
    Ok(dev.theta_sh * threshold / target)
}
