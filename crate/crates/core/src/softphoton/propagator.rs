use std::f64::consts::PI;

use crate::{Error, Result};

/// Anomalous exponent `e²/(4π²)` of the resummed electron propagator.
pub fn propagator_exponent(e: f64) -> Result<f64> {
    if !(e.abs() < 2.0 * PI) {
        return Err(Error::domain(format!("|e| = {} must be below 2π", e.abs())));
    }
    Ok(e * e / (4.0 * PI * PI))
}

/// `(p² − m²)^{−(1 − e²/4π²)}` for positive virtuality.
pub fn resummed_propagator_scaling(virtuality: f64, e: f64) -> Result<f64> {
    if !(virtuality > 0.0 && virtuality.is_finite()) {
        return Err(Error::domain("virtuality p² − m² must be positive"));
    }
    Ok(virtuality.powf(-(1.0 - propagator_exponent(e)?)))
}
