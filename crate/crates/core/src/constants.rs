//! Physical constants, SI units.

/// Gyromagnetic ratio times vacuum permeability, m/(A·s).
pub const GAMMA0: f64 = 2.2127e5;
/// Vacuum permeability, H/m.
pub const MU0: f64 = 1.2566e-6;
/// Boltzmann constant, J/K.
pub const KB: f64 = 1.38e-23;
/// Elementary charge, C.
pub const Q: f64 = 1.6e-19;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054e-34;

/// One oersted in A/m.
pub const OERSTED: f64 = 1000.0 / (4.0 * std::f64::consts::PI);
