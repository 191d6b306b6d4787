use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Behavioral latch comparator reading the conversion device against its dummy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComparatorModel {
    /// Input-referred offset plus noise, V.
    pub sigma: f64,
    /// Read current through each MTJ, A.
    pub read_current: f64,
    /// Energy per decision, J.
    pub energy_per_decision: f64,
    /// Built-in decision threshold on V(conv) − V(dummy), V. Half of the AP-to-P
    /// read swing, so a P device read against its P dummy resolves to 0.
    pub threshold: f64,
}

impl Default for ComparatorModel {
    fn default() -> Self {
        Self { sigma: 5e-3, read_current: 10e-6, energy_per_decision: 10e-15, threshold: 17.5e-3 }
    }
}

impl ComparatorModel {
    pub fn noiseless(self) -> Self {
        Self { sigma: 0.0, ..self }
    }

    /// Threshold at half the read swing of `dev`.
    pub fn centred_for(self, dev: &crate::device::DeviceConfig) -> Self {
        Self { threshold: 0.5 * self.read_current * (dev.r_ap() - dev.r_p), ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SenseResult {
    pub bit: bool,
    /// V(conv) − V(dummy), V.
    pub delta_v: f64,
    /// Differential seen by the latch after the built-in threshold, V.
    pub margin: f64,
    pub metastable: bool,
}

/// Compares read voltages across the conversion and dummy devices against the built-in
/// threshold plus Gaussian offset. Ties resolve to 0.
pub fn sense<R: Rng + ?Sized>(
    r_conv: f64,
    r_dummy: f64,
    comparator: &ComparatorModel,
    rng: &mut R,
) -> SenseResult {
    let delta_v = comparator.read_current * (r_conv - r_dummy);
    let offset = if comparator.sigma > 0.0 {
        comparator.sigma * rng.sample::<f64, _>(StandardNormal)
    } else {
        0.0
    };
    let margin = delta_v - comparator.threshold;
    SenseResult { bit: margin > offset, delta_v, margin, metastable: margin.abs() < 0.1 * comparator.sigma }
}

/// Probability that Gaussian noise of width `sigma` flips a decision whose margin
/// above the latch threshold is `margin`.
pub fn decision_error_probability(margin: f64, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return if margin == 0.0 { 0.5 } else { 0.0 };
    }
    0.5 * libm::erfc(margin.abs() / (sigma * std::f64::consts::SQRT_2))
}
