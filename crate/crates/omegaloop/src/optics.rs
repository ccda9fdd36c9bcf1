//! Collection-efficiency and resolution estimates for confocal readout
//! through the optical access hole in the resonator board.
//!
//! The board acts as a diaphragm: an emitter centered under the hole of
//! diameter D sees the objective through a cone of half-angle
//! alpha = atan(D / (2 t)) with t the board stack thickness, while the
//! objective itself accepts alpha = asin(NA / n). The fraction of photons
//! collected into a cone is FCE = (1 - cos alpha)/2, and restricting the
//! cone widens the lateral resolution by the ratio of the sines. All angle
//! arguments are radians.

use crate::error::{Error, Result};

/// Microscope objective description. `working_distance` is informational
/// and does not enter any formula here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub numerical_aperture: f64,
    pub immersion_index: f64,
    pub working_distance: Option<f64>,
}

impl ObjectiveSpec {
    pub fn new(
        numerical_aperture: f64,
        immersion_index: f64,
        working_distance: Option<f64>,
    ) -> Result<Self> {
        if !(numerical_aperture > 0.0) {
            return Err(Error::domain("numerical aperture must be > 0"));
        }
        if !(immersion_index >= numerical_aperture) {
            return Err(Error::domain(
                "numerical aperture cannot exceed the immersion index",
            ));
        }
        Ok(ObjectiveSpec {
            numerical_aperture,
            immersion_index,
            working_distance,
        })
    }

    /// The oil-immersion objective used with the reference design:
    /// NA 1.4 in n = 1.518 oil.
    pub fn reference() -> Self {
        ObjectiveSpec {
            numerical_aperture: 1.4,
            immersion_index: 1.518,
            working_distance: None,
        }
    }
}

/// Acceptance half-angle of the objective, alpha = asin(NA / n).
pub fn cone_angle_from_na(obj: &ObjectiveSpec) -> Result<f64> {
    if obj.numerical_aperture > obj.immersion_index {
        return Err(Error::domain(
            "numerical aperture cannot exceed the immersion index",
        ));
    }
    Ok((obj.numerical_aperture / obj.immersion_index).asin())
}

/// Fraction of isotropically emitted photons collected into a cone of
/// half-angle alpha: FCE = (1 - cos alpha)/2, at most 1/2 for a half-space.
pub fn collection_efficiency(alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain("cone half-angle must be in [0, pi/2]"));
    }
    Ok((1.0 - alpha.cos()) / 2.0)
}

/// Cone half-angle allowed by an access hole of the given diameter through
/// a board stack of the given thickness, for an emitter centered on the
/// hole axis at the far copper plane: alpha = atan(D / (2 t)).
pub fn cone_angle_from_hole(hole_diameter: f64, stack_thickness: f64) -> Result<f64> {
    if !(hole_diameter > 0.0) || !(stack_thickness > 0.0) {
        return Err(Error::domain("hole diameter and stack thickness must be > 0"));
    }
    Ok((hole_diameter / (2.0 * stack_thickness)).atan())
}

/// Hole diameter needed for a cone half-angle: D = 2 t tan(alpha). Exact
/// inverse of [`cone_angle_from_hole`].
pub fn hole_for_angle(alpha: f64, stack_thickness: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain("cone half-angle must be in (0, pi/2)"));
    }
    if !(stack_thickness > 0.0) {
        return Err(Error::domain("stack thickness must be > 0"));
    }
    Ok(2.0 * stack_thickness * alpha.tan())
}

/// Lateral resolution under an aperture restriction: the effective NA scales
/// with sin(alpha), so a spot of the given FWHM rescales by
/// sin(alpha_restricted) / sin(alpha_full).
pub fn resolution_rescale(fwhm: f64, alpha_restricted: f64, alpha_full: f64) -> Result<f64> {
    let ok = |a: f64| a > 0.0 && a <= std::f64::consts::FRAC_PI_2;
    if !ok(alpha_restricted) || !ok(alpha_full) {
        return Err(Error::domain("angles must be in (0, pi/2]"));
    }
    if !(fwhm > 0.0) {
        return Err(Error::domain("spot size must be > 0"));
    }
    Ok(fwhm * alpha_restricted.sin() / alpha_full.sin())
}

/// FWHM of the Airy disk, 0.51 lambda / NA.
pub fn airy_fwhm(wavelength: f64, na: f64) -> Result<f64> {
    if !(wavelength > 0.0) || !(na > 0.0) {
        return Err(Error::domain("wavelength and NA must be > 0"));
    }
    Ok(0.51 * wavelength / na)
}
