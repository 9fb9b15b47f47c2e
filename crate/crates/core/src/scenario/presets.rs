//! Material presets and unit conversions for laboratory parameters.

use std::f64::consts::LN_10;

use crate::{Error, Result};

/// Vacuum speed of light in cm/s.
pub const SPEED_OF_LIGHT_CM_PER_S: f64 = 2.997_924_58e10;

/// Coupling and loss rates of a waveguide platform, both in s^-1.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialPreset {
    pub name: &'static str,
    pub coupling: f64,
    pub gamma: f64,
    pub ratio: f64,
    /// Range of coupling rates quoted for the platform, if it is a range.
    pub coupling_range: Option<(f64, f64)>,
}

impl MaterialPreset {
    fn new(
        name: &'static str,
        coupling: f64,
        gamma: f64,
        coupling_range: Option<(f64, f64)>,
    ) -> Self {
        Self {
            name,
            coupling,
            gamma,
            ratio: gamma / coupling,
            coupling_range,
        }
    }

    /// Same platform with a different coupling rate.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        if !(coupling > 0.0) || !coupling.is_finite() {
            return Err(Error::Domain(format!(
                "coupling rate {coupling} must be positive"
            )));
        }
        Ok(Self::new(
            self.name,
            coupling,
            self.gamma,
            self.coupling_range,
        ))
    }
}

pub const PRESET_NAMES: [&str; 3] = ["lithium-niobate", "algaas", "silica"];

/// Lithium niobate uses the midpoint of its coupling range by default.
pub fn preset(name: &str) -> Result<MaterialPreset> {
    match name.trim().to_ascii_lowercase().as_str() {
        "lithium-niobate" | "linbo3" => {
            let (lo, hi) = (1.83e10, 4.92e10);
            Ok(MaterialPreset::new(
                "lithium-niobate",
                0.5 * (lo + hi),
                3e9,
                Some((lo, hi)),
            ))
        }
        "algaas" => Ok(MaterialPreset::new("algaas", 2.46e11, 2.7e10, None)),
        "silica" => Ok(MaterialPreset::new("silica", 1.53e11, 3e9, None)),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

pub fn presets() -> Vec<MaterialPreset> {
    PRESET_NAMES
        .iter()
        .map(|n| preset(n).expect("built-in preset"))
        .collect()
}

fn check_speed(speed: f64) -> Result<()> {
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(Error::Domain(format!(
            "propagation speed {speed} must be positive"
        )));
    }
    Ok(())
}

/// Converts a power loss in dB/cm to an amplitude decay rate in s^-1:
/// `gamma = dB ln(10) / 10 * v / 2`.
pub fn loss_db_per_cm_to_rate(loss_db: f64, speed: f64) -> Result<f64> {
    check_speed(speed)?;
    if !(loss_db >= 0.0) || !loss_db.is_finite() {
        return Err(Error::Domain(format!(
            "loss {loss_db} dB/cm must be finite and >= 0"
        )));
    }
    Ok(loss_db * LN_10 / 10.0 * speed / 2.0)
}

/// Inverse of [`loss_db_per_cm_to_rate`].
pub fn rate_to_loss_db_per_cm(rate: f64, speed: f64) -> Result<f64> {
    check_speed(speed)?;
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::Domain(format!(
            "loss rate {rate} must be finite and >= 0"
        )));
    }
    Ok(rate * 20.0 / (LN_10 * speed))
}

/// Dimensionless time `tau = J n l / c` for a guide of length `length_cm`.
pub fn time_from_length(length_cm: f64, refractive_index: f64, coupling: f64) -> f64 {
    coupling * refractive_index * length_cm / SPEED_OF_LIGHT_CM_PER_S
}
