//! Closed-form microstrip transmission-line analytics.
//!
//! Everything here is quasi-static textbook material:
//!
//! * effective permittivity   eps_eff = (er+1)/2 + (er-1)/2 * (1 + 12 H/W)^(-1/2)
//! * characteristic impedance (Hammerstad-Jensen closed form, wide strips)
//! * half-wave resonance      nu0 = c / (2 (L + dL) sqrt(eps_eff))
//! * skin depth               delta = sqrt(rho / (pi nu mu0))
//! * round-wire AC resistance R = rho L / (pi d delta), floored by the DC value
//!
//! The extra length `dL` in the half-wave expression models the loading of a
//! shorted loop and gap at the strip end as a fixed added electrical length.
//! It is calibrated from one anchor point (a 17 mm strip on the reference
//! laminate resonating at 2.93 GHz gives dL = 13.5 mm) and is accurate to a
//! few percent over 17..56 mm, degrading to roughly 15 percent low at 5 mm.
//! Callers can override it per design.

use crate::constants::{COPPER_RESISTIVITY, SPEED_OF_LIGHT, VACUUM_PERMEABILITY};
use crate::error::{Error, Result};

/// Default loaded-length correction (m) for the reference loop and gap.
pub const DEFAULT_LOADING_LENGTH: f64 = 13.5e-3;

/// Laminate stack-up: dielectric plus copper cladding on both faces.
///
/// `loss_tangent` and `cladding_thickness` do not enter the quasi-static
/// formulas in this module; they are carried so that reports can state the
/// full stack-up and so the optics hole geometry can derive the stack height.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstrateSpec {
    pub rel_permittivity: f64,
    pub loss_tangent: f64,
    /// Dielectric height H between strip and ground plane, m.
    pub dielectric_thickness: f64,
    /// Copper cladding thickness per face, m.
    pub cladding_thickness: f64,
    /// Conductor resistivity, Ohm*m.
    pub conductor_resistivity: f64,
}

impl SubstrateSpec {
    pub fn new(
        rel_permittivity: f64,
        loss_tangent: f64,
        dielectric_thickness: f64,
        cladding_thickness: f64,
        conductor_resistivity: f64,
    ) -> Result<Self> {
        if !(rel_permittivity >= 1.0) {
            return Err(Error::domain("relative permittivity must be >= 1"));
        }
        if !(loss_tangent >= 0.0) {
            return Err(Error::domain("loss tangent must be >= 0"));
        }
        if !(dielectric_thickness > 0.0) || !(cladding_thickness > 0.0) {
            return Err(Error::domain("substrate thicknesses must be > 0"));
        }
        if !(conductor_resistivity > 0.0) {
            return Err(Error::domain("conductor resistivity must be > 0"));
        }
        Ok(SubstrateSpec {
            rel_permittivity,
            loss_tangent,
            dielectric_thickness,
            cladding_thickness,
            conductor_resistivity,
        })
    }

    /// The laminate of the reference design: er = 3.00, tan d = 0.001,
    /// 0.13 mm dielectric, 18 um copper per face.
    pub fn reference() -> Self {
        SubstrateSpec {
            rel_permittivity: 3.00,
            loss_tangent: 0.001,
            dielectric_thickness: 0.13e-3,
            cladding_thickness: 18e-6,
            conductor_resistivity: COPPER_RESISTIVITY,
        }
    }

    /// Total stack height seen by an emitter under the board: dielectric
    /// plus cladding on both faces.
    pub fn stack_thickness(&self) -> f64 {
        self.dielectric_thickness + 2.0 * self.cladding_thickness
    }
}

/// A straight microstrip segment.
#[derive(Debug, Clone, PartialEq)]
pub struct MicrostripSection {
    pub width: f64,
    pub length: f64,
    pub substrate: SubstrateSpec,
}

impl MicrostripSection {
    pub fn new(width: f64, length: f64, substrate: SubstrateSpec) -> Result<Self> {
        if !(width > 0.0) || !(length > 0.0) {
            return Err(Error::domain("microstrip width and length must be > 0"));
        }
        Ok(MicrostripSection {
            width,
            length,
            substrate,
        })
    }
}

/// Quasi-static effective permittivity of a microstrip of width `width`.
///
/// eps_eff = (er+1)/2 + (er-1)/2 * (1 + 12 H/W)^(-1/2)
///
/// Bounded by (er+1)/2 from below (narrow strip, half the field in air) and
/// er from above (infinitely wide strip).
pub fn effective_permittivity(substrate: &SubstrateSpec, width: f64) -> Result<f64> {
    if !(width > 0.0) {
        return Err(Error::domain("strip width must be > 0"));
    }
    let er = substrate.rel_permittivity;
    let h = substrate.dielectric_thickness;
    Ok((er + 1.0) / 2.0 + (er - 1.0) / 2.0 / (1.0 + 12.0 * h / width).sqrt())
}

/// Characteristic impedance of a wide microstrip (W/H >= 1).
///
/// Uses the Hammerstad-Jensen closed form (MTT 1980), which is accurate to
/// about 0.2 percent over 0.01 < W/H < 100:
///
///   Z0 = eta0 / (2 pi sqrt(eps_eff)) * ln( f(u)/u + sqrt(1 + (2/u)^2) )
///   f(u) = 6 + (2 pi - 6) exp(-(30.666/u)^0.7528),  u = W/H
///
/// together with its companion effective-permittivity expression. The simpler
/// `0.667 ln(u + 1.444)` textbook form agrees with this one within a percent
/// for u above 5 but is several percent high near u = 2, which matters for
/// 50 Ohm feed lines on thin laminates.
///
/// Narrow strips (W/H < 1) are rejected here; see [`narrow_strip_impedance`].
pub fn characteristic_impedance(substrate: &SubstrateSpec, width: f64) -> Result<f64> {
    let h = substrate.dielectric_thickness;
    let u = width / h;
    if !(u >= 1.0) {
        return Err(Error::UnsupportedGeometry(format!(
            "W/H = {u:.3} is below 1; use narrow_strip_impedance for an advisory value"
        )));
    }
    let er = substrate.rel_permittivity;
    let eta0 = 120.0 * std::f64::consts::PI;

    let fu = 6.0 + (2.0 * std::f64::consts::PI - 6.0) * (-(30.666 / u).powf(0.7528)).exp();
    let z_air = eta0 / (2.0 * std::f64::consts::PI) * (fu / u + (1.0 + (2.0 / u).powi(2)).sqrt()).ln();

    let a = 1.0
        + ((u.powi(4) + (u / 52.0).powi(2)) / (u.powi(4) + 0.432)).ln() / 49.0
        + (1.0 + (u / 18.1).powi(3)).ln() / 18.7;
    let b = 0.564 * ((er - 0.9) / (er + 3.0)).powf(0.053);
    let eps = (er + 1.0) / 2.0 + (er - 1.0) / 2.0 * (1.0 + 10.0 / u).powf(-a * b);

    Ok(z_air / eps.sqrt())
}

/// Narrow-strip companion impedance formula for W/H <= 1. Advisory only: the
/// designs this crate targets all sit at W/H >= 2, so this branch is offered
/// for completeness and is not validated against hardware.
///
///   Z0 = 60/sqrt(eps_eff) * ln(8 H/W + W/(4 H))
///
/// with the thin-strip correction term 0.04 (1 - W/H)^2 added to eps_eff.
pub fn narrow_strip_impedance(substrate: &SubstrateSpec, width: f64) -> Result<f64> {
    let h = substrate.dielectric_thickness;
    let u = width / h;
    if !(u > 0.0) {
        return Err(Error::domain("strip width must be > 0"));
    }
    if u > 1.0 {
        return Err(Error::UnsupportedGeometry(format!(
            "W/H = {u:.3} is above 1; use characteristic_impedance"
        )));
    }
    let er = substrate.rel_permittivity;
    let eps = (er + 1.0) / 2.0
        + (er - 1.0) / 2.0 * ((1.0 + 12.0 / u).powf(-0.5) + 0.04 * (1.0 - u).powi(2));
    Ok(60.0 / eps.sqrt() * (8.0 / u + u / 4.0).ln())
}

/// Half-wave resonance frequency of a section, including the loaded-length
/// correction: nu0 = c / (2 (L + loading) sqrt(eps_eff)).
pub fn half_wave_frequency(section: &MicrostripSection, loading_length: f64) -> Result<f64> {
    if !(loading_length >= 0.0) {
        return Err(Error::domain("loading length must be >= 0"));
    }
    let eps = effective_permittivity(&section.substrate, section.width)?;
    Ok(SPEED_OF_LIGHT / (2.0 * (section.length + loading_length) * eps.sqrt()))
}

/// Strip length that resonates at `target`, the exact algebraic inverse of
/// [`half_wave_frequency`].
pub fn length_for_frequency(
    target: f64,
    width: f64,
    substrate: &SubstrateSpec,
    loading_length: f64,
) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::domain("target frequency must be > 0"));
    }
    let eps = effective_permittivity(substrate, width)?;
    let length = SPEED_OF_LIGHT / (2.0 * target * eps.sqrt()) - loading_length;
    if length <= 0.0 {
        return Err(Error::InfeasibleDesign(format!(
            "loading length {:.3} mm exceeds the total electrical length needed for {:.3} GHz",
            loading_length * 1e3,
            target / 1e9
        )));
    }
    Ok(length)
}

/// Skin depth delta = sqrt(rho / (pi nu mu0)).
pub fn skin_depth(resistivity: f64, frequency: f64) -> Result<f64> {
    if !(resistivity > 0.0) {
        return Err(Error::domain("resistivity must be > 0"));
    }
    if !(frequency > 0.0) {
        return Err(Error::domain("frequency must be > 0"));
    }
    Ok((resistivity / (std::f64::consts::PI * frequency * VACUUM_PERMEABILITY)).sqrt())
}

/// Resistance of a round wire of the given length and diameter.
///
/// At high frequency the current crowds into one skin depth along the
/// circumference, R = rho L / (pi d delta). The DC value rho L / (pi (d/2)^2)
/// is a floor: the returned value is max(DC, AC), which also makes the result
/// monotone non-decreasing in frequency. Passing `frequency = 0` returns the
/// DC resistance.
pub fn round_wire_ac_resistance(
    length: f64,
    diameter: f64,
    resistivity: f64,
    frequency: f64,
) -> Result<f64> {
    if !(length > 0.0) || !(diameter > 0.0) {
        return Err(Error::domain("wire length and diameter must be > 0"));
    }
    if !(resistivity > 0.0) {
        return Err(Error::domain("resistivity must be > 0"));
    }
    let r_dc = resistivity * length / (std::f64::consts::PI * (diameter / 2.0).powi(2));
    if frequency <= 0.0 {
        return Ok(r_dc);
    }
    let delta = skin_depth(resistivity, frequency)?;
    let r_ac = resistivity * length / (std::f64::consts::PI * diameter * delta);
    Ok(r_ac.max(r_dc))
}
