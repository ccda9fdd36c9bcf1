//! Physical constants used throughout the crate, SI units.
//!
//! Kept in one place so every module agrees on the same values.

/// Speed of light in vacuum, m/s (exact by definition).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Vacuum permeability, H/m (classic 4*pi*1e-7 value).
pub const VACUUM_PERMEABILITY: f64 = 4.0e-7 * std::f64::consts::PI;

/// Resistivity of annealed copper at room temperature, Ohm*m.
pub const COPPER_RESISTIVITY: f64 = 1.68e-8;
