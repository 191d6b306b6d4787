use thiserror::Error;

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("effective temperature {temperature:.1} K at {v_bias} V reaches the Curie point")]
    AboveCurie { v_bias: f64, temperature: f64 },

    #[error("integration unstable at t = {t:.3e} s: |m| drifted by {drift:.3e}")]
    Instability { t: f64, drift: f64 },

    #[error("reset failed: device ended with m_z = {mz:.4}")]
    ResetFailed { mz: f64 },

    #[error("width {width_nm:.2} nm for level {level} is outside 10..500 nm")]
    InfeasibleWidth { level: usize, width_nm: f64 },

    #[error("non-monotonic transfer: code fell from {from} to {to} at {input:.6e} A")]
    NonMonotonicTransfer { from: u8, to: u8, input: f64 },

    #[error("no code transitions found in the ramp range")]
    NoTransitions,

    #[error("ramp found only {found} of 7 code transitions")]
    IncompleteTransfer { found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
