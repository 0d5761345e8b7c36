//! Physical constants (CODATA) used across the mean field and interactions.

/// hbar * c in MeV fm.
pub const HBAR_C: f64 = 197.327;

/// Coulomb constant e^2 / (4 pi eps0) in MeV fm.
pub const E2_OVER_4PI_EPS0: f64 = 1.43996;

/// Proton mass in MeV / c^2.
pub const M_PROTON: f64 = 938.3;

/// Neutron mass in MeV / c^2.
pub const M_NEUTRON: f64 = 939.6;

/// Species-averaged nucleon mass (M_p + M_n) / 2 in MeV / c^2.
pub const M_NUCLEON_AVG: f64 = 938.95;

/// Oscillator length parameter alpha = 1.1 / A^(1/6) in 1/fm.
pub fn oscillator_alpha(mass_number: u32) -> f64 {
    1.1 / crate::math::powf(mass_number as f64, 1.0 / 6.0)
}
