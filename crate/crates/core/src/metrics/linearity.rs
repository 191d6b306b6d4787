use serde::{Deserialize, Serialize};

use crate::metrics::TransferCurve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnlInlReport {
    /// One value per interior code width, LSB.
    pub dnl: Vec<f64>,
    /// One value per threshold against the endpoint-fit line, LSB.
    pub inl: Vec<f64>,
    pub dnl_range: (f64, f64),
    pub inl_range: (f64, f64),
    pub lsb: f64,
    /// Σ DNL − ((T_last − T_first)/lsb − (n − 1)); zero up to rounding.
    pub telescoping_residual: f64,
}

fn range(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

pub fn dnl_inl(curve: &TransferCurve) -> DnlInlReport {
    let t = &curve.thresholds;
    let lsb = curve.lsb;
    let n = t.len();
    let dnl: Vec<f64> = t.windows(2).map(|w| (w[1] - w[0]) / lsb - 1.0).collect();
    let (first, last) = (t[0], t[n - 1]);
    let step = (last - first) / (n - 1) as f64;
    let inl: Vec<f64> = t
        .iter()
        .enumerate()
        .map(|(k, &tk)| (tk - (first + k as f64 * step)) / lsb)
        .collect();
    let expected = (last - first) / lsb - (n - 1) as f64;
    DnlInlReport {
        dnl_range: range(&dnl),
        inl_range: range(&inl),
        telescoping_residual: dnl.iter().sum::<f64>() - expected,
        dnl,
        inl,
        lsb,
    }
}

/// Whether an observed (min, max) range lies inside `[lo − margin, hi + margin]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeCheck {
    pub observed: (f64, f64),
    pub reference: (f64, f64),
    pub margin: f64,
    pub pass: bool,
    /// Distances of the observed endpoints from the reference endpoints.
    pub endpoint_error: (f64, f64),
}

impl RangeCheck {
    pub fn new(observed: (f64, f64), reference: (f64, f64), margin: f64) -> Self {
        let pass = observed.0 >= reference.0 - margin && observed.1 <= reference.1 + margin;
        Self {
            observed,
            reference,
            margin,
            pass,
            endpoint_error: (observed.0 - reference.0, observed.1 - reference.1),
        }
    }
}
