//! Physical constants and unit conversions (SI).

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Astronomical unit, m.
pub const ASTRONOMICAL_UNIT: f64 = 1.495_978_707e11;

/// Centimetres per metre.
pub const CM_PER_M: f64 = 100.0;
