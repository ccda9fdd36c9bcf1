//! NV-center spin physics: drive-field to Rabi-frequency conversion, pulse
//! and power budgets, and ground-state transition frequencies.
//!
//! The linear drive conversion is
//!
//!   f_R = gamma * mu0 * H * drive_projection
//!
//! with gamma the gyromagnetic ratio over 2 pi (28 GHz/T) and a projection
//! factor that folds three things into one number: the fraction of the
//! linearly polarized field perpendicular to the NV axis, the sqrt(2)
//! matrix element of a single |0> to |+-1> transition, and the 1/2 from the
//! rotating-wave decomposition. For a field along a (001) surface normal
//! driving a (111)-oriented center these combine to 1/sqrt(3), the default.
//!
//! Static-field effects come from the ground-state spin-1 Hamiltonian
//! H/h = D Sz'^2 + gamma B . S in the NV frame. The azimuth of the
//! perpendicular field component only rotates eigenvectors, never
//! eigenvalues, so the matrix can be taken real symmetric and handed to the
//! small Jacobi solver.

use crate::constants::VACUUM_PERMEABILITY;
use crate::error::{Error, Result};
use crate::fields::FieldEfficiency;
use crate::jacobi::symmetric_eigen_3x3;

/// Parameters of the driven center.
#[derive(Debug, Clone, PartialEq)]
pub struct NVConfig {
    /// Zero-field splitting D, Hz.
    pub zero_field_splitting: f64,
    /// Gyromagnetic ratio over 2 pi, Hz/T.
    pub gyromagnetic_ratio: f64,
    /// Unit vector along the NV symmetry axis, lab frame.
    pub nv_axis: [f64; 3],
    /// Geometric drive projection factor in (0, 1].
    pub drive_projection: f64,
}

impl Default for NVConfig {
    fn default() -> Self {
        NVConfig {
            zero_field_splitting: 2.87e9,
            gyromagnetic_ratio: 28e9,
            nv_axis: [0.0, 0.0, 1.0],
            drive_projection: 1.0 / 3f64.sqrt(),
        }
    }
}

impl NVConfig {
    /// Validating constructor; the axis is normalized.
    pub fn new(
        zero_field_splitting: f64,
        gyromagnetic_ratio: f64,
        nv_axis: [f64; 3],
        drive_projection: f64,
    ) -> Result<Self> {
        if !(zero_field_splitting > 0.0) || !(gyromagnetic_ratio > 0.0) {
            return Err(Error::domain("splitting and gyromagnetic ratio must be > 0"));
        }
        if !(drive_projection > 0.0 && drive_projection <= 1.0) {
            return Err(Error::domain("drive projection must be in (0, 1]"));
        }
        let norm = (nv_axis[0] * nv_axis[0] + nv_axis[1] * nv_axis[1] + nv_axis[2] * nv_axis[2])
            .sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("NV axis must be a finite nonzero vector"));
        }
        Ok(NVConfig {
            zero_field_splitting,
            gyromagnetic_ratio,
            nv_axis: [nv_axis[0] / norm, nv_axis[1] / norm, nv_axis[2] / norm],
            drive_projection,
        })
    }

    /// Conversion slope f_R / H in Hz per A/m.
    fn drive_slope(&self) -> f64 {
        self.gyromagnetic_ratio * VACUUM_PERMEABILITY * self.drive_projection
    }
}

/// Static magnetic field vector in the lab frame, tesla.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldVector {
    pub components: [f64; 3],
}

impl FieldVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::domain("field components must be finite"));
        }
        Ok(FieldVector {
            components: [x, y, z],
        })
    }

    pub fn norm(&self) -> f64 {
        let [x, y, z] = self.components;
        (x * x + y * y + z * z).sqrt()
    }
}

/// Rabi frequency driven by a linear field of amplitude `h` (A/m).
pub fn rabi_from_field(h: f64, cfg: &NVConfig) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(Error::domain("drive field must be >= 0"));
    }
    Ok(cfg.drive_slope() * h)
}

/// Drive-field amplitude behind a measured Rabi frequency, rescaled from the
/// power it was measured at to a reference power (fields scale as sqrt P):
/// H_ref = (f_R / slope) * sqrt(reference_power / power).
pub fn field_from_rabi(f_r: f64, power: f64, reference_power: f64, cfg: &NVConfig) -> Result<f64> {
    if !(f_r >= 0.0) {
        return Err(Error::domain("Rabi frequency must be >= 0"));
    }
    if !(power > 0.0) || !(reference_power > 0.0) {
        return Err(Error::domain("powers must be > 0"));
    }
    Ok(f_r / cfg.drive_slope() * (reference_power / power).sqrt())
}

/// Pi-pulse duration t_pi = 1/(2 f_R).
pub fn pi_pulse_duration(f_r: f64) -> Result<f64> {
    if !(f_r > 0.0) {
        return Err(Error::domain("Rabi frequency must be > 0"));
    }
    Ok(1.0 / (2.0 * f_r))
}

/// Excitation bandwidth 1.2 / t_pi of a rectangular pi pulse.
pub fn excitation_bandwidth(t_pi: f64) -> Result<f64> {
    if !(t_pi > 0.0) {
        return Err(Error::domain("pulse duration must be > 0"));
    }
    Ok(1.2 / t_pi)
}

/// Input power needed for a pi pulse of duration `t_pi` through a structure
/// with the given conversion efficiency: P = (H_needed / efficiency)^2 with
/// H_needed the field for f_R = 1/(2 t_pi) at 1 W.
pub fn power_for_pi(t_pi: f64, efficiency: &FieldEfficiency, cfg: &NVConfig) -> Result<f64> {
    if !(t_pi > 0.0) {
        return Err(Error::domain("pulse duration must be > 0"));
    }
    if !(efficiency.value > 0.0) {
        return Err(Error::domain("efficiency must be > 0"));
    }
    let h_needed = field_from_rabi(1.0 / (2.0 * t_pi), 1.0, 1.0, cfg)?;
    Ok((h_needed / efficiency.value).powi(2))
}

/// Ground-state transition frequencies (f_minus, f_plus) with f_minus <=
/// f_plus, from the mS = 0-like sublevel to the two mS = +-1-like sublevels,
/// for an arbitrary static field.
pub fn transition_frequencies(b: &FieldVector, cfg: &NVConfig) -> Result<(f64, f64)> {
    let [bx, by, bz] = b.components;
    if !(bx.is_finite() && by.is_finite() && bz.is_finite()) {
        return Err(Error::domain("field components must be finite"));
    }
    let axis = cfg.nv_axis;
    let axis_norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(axis_norm > 0.0) {
        return Err(Error::domain("NV axis must be nonzero"));
    }
    let b_par = (bx * axis[0] + by * axis[1] + bz * axis[2]) / axis_norm;
    let b_perp = (b.norm().powi(2) - b_par * b_par).max(0.0).sqrt();

    let d = cfg.zero_field_splitting;
    let g = cfg.gyromagnetic_ratio;
    // basis |+1>, |0>, |-1>; Sx couples with matrix element 1/sqrt(2)
    let x = g * b_perp / 2f64.sqrt();
    let m = [
        [d + g * b_par, x, 0.0],
        [x, 0.0, x],
        [0.0, x, d - g * b_par],
    ];
    let eig = symmetric_eigen_3x3(m)?;

    // the "ground" sublevel is the eigenvector with the largest |0> overlap;
    // on a tie the lower-energy candidate wins
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        eig.values[i]
            .partial_cmp(&eig.values[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut ground = order[0];
    for &k in &order {
        if eig.vectors[k][1].abs() > eig.vectors[ground][1].abs() {
            ground = k;
        }
    }
    let mut fs: Vec<f64> = order
        .iter()
        .filter(|&&k| k != ground)
        .map(|&k| eig.values[k] - eig.values[ground])
        .collect();
    fs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok((fs[0], fs[1]))
}

/// Axial field component behind a measured line splitting:
/// B_par = delta_nu / (2 gamma). Exact inverse of the axial closed form
/// f_plus - f_minus = 2 gamma B_par.
pub fn axial_field_from_splitting(delta_nu: f64, cfg: &NVConfig) -> Result<f64> {
    if !(delta_nu >= 0.0) {
        return Err(Error::domain("splitting must be >= 0"));
    }
    Ok(delta_nu / (2.0 * cfg.gyromagnetic_ratio))
}
