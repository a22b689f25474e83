//! The exponential integral and the quartic anharmonic oscillator, end to end.

pub mod e1;
pub mod oscillator;

pub use e1::{e1_factorial_coeffs, e1_quadrature, e1_reference, scaled_e1_reference, E1Series};
pub use oscillator::{
    asymptotics_check, oscillator_coeffs, oscillator_energy, pade_degrees, OscillatorMethod, OscillatorSeries,
    E_EXACT,
};
