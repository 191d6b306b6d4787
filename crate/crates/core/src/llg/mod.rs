//! Stochastic Landau–Lifshitz–Gilbert integration for a single macrospin.

mod drive;
mod field;
mod integrator;

pub use drive::{DriveSample, DriveSegment, DriveWaveform};
pub use field::{
    assemble_effective_field, compute_torques, llg_rhs, sample_thermal_field, thermal_sigma, Dynamics,
    EffectiveField, ThermalModel, TorqueTerms, SOT_POLARIZATION, STT_POLARIZATION,
};
pub use integrator::{
    integrate, integrate_observed, IntegratorConfig, MagnetizationState, Scheme, StepObserver, Trajectory,
    TrajectoryPoint, TrajectoryStats, INSTABILITY_DRIFT, MAX_DT,
};
