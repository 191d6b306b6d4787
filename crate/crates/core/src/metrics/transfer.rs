use serde::{Deserialize, Serialize};

use crate::adc::{sense, thermometer_to_binary, BankRole, PipelineConfig, QuantizerBank, ThermometerCode, N_LEVELS};
use crate::device::MagState;
use crate::error::{Result, SimError};

/// Anything that maps an input current to an output code.
pub trait Converter {
    fn convert(&self, input: f64) -> Result<u8>;
}

impl<F: Fn(f64) -> Result<u8>> Converter for F {
    fn convert(&self, input: f64) -> Result<u8> {
        self(input)
    }
}

/// One isolated conversion per call: a fresh all-P bank quantizes the input and is
/// sensed against an all-P dummy of the same devices.
#[derive(Debug, Clone)]
pub struct SingleShotAdc {
    pub bank: QuantizerBank,
    pub cfg: PipelineConfig,
}

impl SingleShotAdc {
    pub fn new(bank: QuantizerBank, cfg: PipelineConfig) -> Self {
        Self { bank, cfg }
    }

    pub fn thermometer(&self, input: f64) -> Result<ThermometerCode> {
        use rand::SeedableRng;
        let mut conv = self.bank.clone();
        conv.role = BankRole::Conversion;
        conv.states = vec![MagState::P; N_LEVELS];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.cfg.seed);
        conv.quantize(input, &self.cfg.conversion, &self.cfg.sim, &mut rng)?;
        let mut code = ThermometerCode::default();
        for k in 0..N_LEVELS {
            let dev = &conv.devices[k];
            let s = sense(dev.state_resistance(conv.states[k]), dev.r_p, &self.cfg.comparator, &mut rng);
            code.bits[k] = s.bit;
        }
        Ok(code)
    }
}

impl Converter for SingleShotAdc {
    fn convert(&self, input: f64) -> Result<u8> {
        Ok(thermometer_to_binary(&self.thermometer(input)?).value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferCurve {
    /// Input currents at which the code steps from k to k+1, A.
    pub thresholds: Vec<f64>,
    pub lsb: f64,
    pub i_start: f64,
    pub i_stop: f64,
    pub steps: usize,
    /// Codes seen on the coarse ramp.
    pub ramp_codes: Vec<u8>,
}

impl TransferCurve {
    /// Curve with given thresholds, for analysis of externally measured data.
    pub fn from_thresholds(thresholds: Vec<f64>, i_start: f64, i_stop: f64) -> Self {
        Self {
            thresholds,
            lsb: (i_stop - i_start) / 8.0,
            i_start,
            i_stop,
            steps: 0,
            ramp_codes: Vec::new(),
        }
    }
}

pub const MIN_STEPS_PER_CODE: usize = 64;

/// Ramps `adc` from `i_start` to `i_stop` in `steps` equal increments, then bisects
/// each code transition down to floating-point resolution.
pub fn measure_transfer<C: Converter + ?Sized>(
    adc: &C,
    i_start: f64,
    i_stop: f64,
    steps: usize,
) -> Result<TransferCurve> {
    if !(i_stop > i_start) || steps < MIN_STEPS_PER_CODE * 8 {
        return Err(SimError::InvalidArgument(format!(
            "ramp needs i_stop > i_start and at least {} steps",
            MIN_STEPS_PER_CODE * 8
        )));
    }
    let ramp: Vec<f64> = (0..=steps)
        .map(|j| i_start + (i_stop - i_start) * j as f64 / steps as f64)
        .collect();
    let mut codes = Vec::with_capacity(ramp.len());
    for (j, &i) in ramp.iter().enumerate() {
        let code = adc.convert(i)?;
        if let Some(&prev) = codes.last() {
            if code < prev {
                return Err(SimError::NonMonotonicTransfer { from: prev, to: code, input: ramp[j] });
            }
        }
        codes.push(code);
    }
    if codes.iter().all(|&c| c == codes[0]) {
        return Err(SimError::NoTransitions);
    }

    let mut thresholds = Vec::with_capacity(N_LEVELS);
    for level in 1..=N_LEVELS as u8 {
        let Some(j) = codes.iter().position(|&c| c >= level) else {
            return Err(SimError::IncompleteTransfer { found: thresholds.len() });
        };
        if j == 0 {
            thresholds.push(i_start);
            continue;
        }
        let (mut lo, mut hi) = (ramp[j - 1], ramp[j]);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-13 * hi.abs() {
                break;
            }
            if adc.convert(mid)? >= level {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        thresholds.push(0.5 * (lo + hi));
    }
    Ok(TransferCurve {
        thresholds,
        lsb: (i_stop - i_start) / 8.0,
        i_start,
        i_stop,
        steps,
        ramp_codes: codes,
    })
}
