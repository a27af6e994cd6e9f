//! Physical constants (2019 SI) and unit conversions.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;

/// Angular frequency corresponding to 1 eV, rad/s.
pub const EV_TO_RAD_PER_S: f64 = 1.519267e15;

/// Plasma frequency of gold, 9.0 eV.
pub const AU_PLASMA_FREQUENCY: f64 = 9.0 * EV_TO_RAD_PER_S;

/// Drude relaxation rate used for gold when none is given, 0.035 eV.
pub const AU_DRUDE_GAMMA: f64 = 0.035 * EV_TO_RAD_PER_S;

pub fn ev_to_rad_per_s(ev: f64) -> f64 {
    ev * EV_TO_RAD_PER_S
}

pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega / EV_TO_RAD_PER_S
}
