//! Lumped coupled-resonator network model.
//!
//! A half-wave resonator coupled to feed lines with equal input and output
//! coupling beta responds with
//!
//!   transmission:  Gamma = -(1 - i xi) / (1 + 2 beta - i xi),
//!                  T     = 2 beta / (1 + 2 beta - i xi)
//!   reflection:    Gamma = -(1 - beta - i xi) / (1 + beta + i xi)
//!
//! where xi = Q0 (nu0/nu - nu/nu0) is the normalized frequency offset. The
//! fraction of incident power absorbed by the resonator follows by energy
//! conservation, and its square root sets the field enhancement relative to
//! a matched line. Everything is evaluated in complex arithmetic so that
//! phase traces from a VNA can be fitted without redesign, even though most
//! plots only use magnitudes.
//!
//! Half-power bandwidths are (1+2 beta)/Q0 * nu0 (transmission) and
//! (1+ beta)/Q0 * nu0 (reflection). These are exact for the xi lineshape,
//! not just first order: the two half-power roots of the quadratic in
//! nu/nu0 differ by exactly that amount.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Operating mode of the resonator network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Strip fed at both ends, response measured through the device.
    Transmission,
    /// Strip fed at one end, the other end open; response seen in S11 only.
    Reflection,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Transmission => write!(f, "transmission"),
            Mode::Reflection => write!(f, "reflection"),
        }
    }
}

/// Parameter triple describing one resonance.
///
/// Invariants (checked by [`ResonatorParams::new`]): all three values must be
/// positive. The fields are public for ergonomic updates in fitting code;
/// constructing values that violate the invariants by hand is on the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorParams {
    pub resonance_frequency: f64,
    pub unloaded_q: f64,
    pub coupling: f64,
    pub mode: Mode,
}

impl ResonatorParams {
    pub fn new(resonance_frequency: f64, unloaded_q: f64, coupling: f64, mode: Mode) -> Result<Self> {
        if !(resonance_frequency > 0.0) {
            return Err(Error::domain("resonance frequency must be > 0"));
        }
        if !(unloaded_q > 0.0) {
            return Err(Error::domain("unloaded Q must be > 0"));
        }
        if !(coupling > 0.0) {
            return Err(Error::domain("coupling must be > 0"));
        }
        Ok(ResonatorParams {
            resonance_frequency,
            unloaded_q,
            coupling,
            mode,
        })
    }
}

/// Complex S-parameter pair at one frequency. `t` is `None` in reflection
/// mode, where the network has a single port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SPair {
    pub gamma: Complex64,
    pub t: Option<Complex64>,
}

/// Normalized frequency offset xi = Q0 (nu0/nu - nu/nu0).
///
/// Zero on resonance, positive below it, negative above, and antisymmetric
/// under nu <-> nu0^2/nu (reflection about nu0 on a log axis).
pub fn normalized_offset(params: &ResonatorParams, frequency: f64) -> Result<f64> {
    if !(frequency > 0.0) {
        return Err(Error::domain("frequency must be > 0"));
    }
    let ratio = params.resonance_frequency / frequency;
    Ok(params.unloaded_q * (ratio - 1.0 / ratio))
}

/// Reflection and transmission of the two-port (transmission-mode) network.
pub fn two_port_response(params: &ResonatorParams, frequency: f64) -> Result<SPair> {
    if params.mode != Mode::Transmission {
        return Err(Error::ModeMismatch {
            expected: Mode::Transmission,
            got: params.mode,
        });
    }
    let xi = normalized_offset(params, frequency)?;
    let beta = params.coupling;
    let denom = Complex64::new(1.0 + 2.0 * beta, -xi);
    let gamma = -Complex64::new(1.0, -xi) / denom;
    let t = Complex64::new(2.0 * beta, 0.0) / denom;
    Ok(SPair { gamma, t: Some(t) })
}

/// Reflection of the one-port (reflection-mode) network.
pub fn one_port_response(params: &ResonatorParams, frequency: f64) -> Result<Complex64> {
    if params.mode != Mode::Reflection {
        return Err(Error::ModeMismatch {
            expected: Mode::Reflection,
            got: params.mode,
        });
    }
    let xi = normalized_offset(params, frequency)?;
    let beta = params.coupling;
    Ok(-Complex64::new(1.0 - beta, -xi) / Complex64::new(1.0 + beta, xi))
}

/// Fraction of the incident power absorbed by the resonator, R^2.
///
/// Energy conservation gives R^2 = 1 - |Gamma|^2 - |T|^2 (transmission) or
/// 1 - |Gamma|^2 (reflection). Expanding those with the lineshapes yields
/// the manifestly non-negative closed forms used here,
///
///   transmission: 4 beta / ((1 + 2 beta)^2 + xi^2)
///   reflection:   4 beta / ((1 +   beta)^2 + xi^2)
///
/// The equality with the subtracted |S|^2 form is pinned down in the tests.
pub fn absorbed_fraction(params: &ResonatorParams, frequency: f64) -> Result<f64> {
    let xi = normalized_offset(params, frequency)?;
    let beta = params.coupling;
    let loading = match params.mode {
        Mode::Transmission => 1.0 + 2.0 * beta,
        Mode::Reflection => 1.0 + beta,
    };
    Ok(4.0 * beta / (loading * loading + xi * xi))
}

/// Peak field enhancement factor R(nu0), the square root of the on-resonance
/// absorbed fraction: 2 sqrt(beta)/(1+2 beta) in transmission and
/// 2 sqrt(beta)/(1+beta) in reflection. Maximal at beta = 1/2 resp. beta = 1.
pub fn peak_field_factor(params: &ResonatorParams) -> f64 {
    let beta = params.coupling;
    match params.mode {
        Mode::Transmission => 2.0 * beta.sqrt() / (1.0 + 2.0 * beta),
        Mode::Reflection => 2.0 * beta.sqrt() / (1.0 + beta),
    }
}

/// Half-power bandwidth of the absorbed-power resonance.
pub fn bandwidth(params: &ResonatorParams) -> f64 {
    let loading = match params.mode {
        Mode::Transmission => 1.0 + 2.0 * params.coupling,
        Mode::Reflection => 1.0 + params.coupling,
    };
    loading / params.unloaded_q * params.resonance_frequency
}

/// Voltage ringing time t_r = 1/(pi * bandwidth) of a loaded resonator:
/// the time constant on which stored energy follows a drive edge.
pub fn ringing_time(bandwidth: f64) -> Result<f64> {
    if !(bandwidth > 0.0) {
        return Err(Error::domain("bandwidth must be > 0"));
    }
    Ok(1.0 / (std::f64::consts::PI * bandwidth))
}

/// Coupling coefficient from the impedance ratio, beta = Q0 * Z_R / Z_L.
///
/// This is the high-Q limit of the exact loaded-line result (which carries a
/// -1 that is negligible for Q0 >> 1). With Z_R = Z_L it returns Q0 itself.
/// Note that beta values extracted by fitting simulated or measured S-curves
/// routinely disagree with this route by tens of percent for wide strips;
/// report both rather than reconciling them.
pub fn coupling_from_impedances(unloaded_q: f64, z_resonator: f64, z_line: f64) -> Result<f64> {
    if !(unloaded_q > 0.0) || !(z_resonator > 0.0) || !(z_line > 0.0) {
        return Err(Error::domain("Q and impedances must be > 0"));
    }
    Ok(unloaded_q * z_resonator / z_line)
}

/// Reflection coefficient of a width-step discontinuity seen from the feed
/// line: Gamma = -(Z_L - Z_R)/(Z_L + Z_R). Diagnostic only; the lineshape
/// models above already account for the coupling through beta.
pub fn step_reflection(z_line: f64, z_resonator: f64) -> Result<f64> {
    if !(z_line > 0.0) || !(z_resonator > 0.0) {
        return Err(Error::domain("impedances must be > 0"));
    }
    Ok(-(z_line - z_resonator) / (z_line + z_resonator))
}

/// Field rolloff of a reflection-mode line whose loop sits a quarter wave
/// from the open end: H(nu)/H(nu0) = sin(pi nu / (2 nu0)). Unity at nu0,
/// 1/sqrt(2) at nu0/2, zero at DC. Defined for 0 < nu <= 2 nu0.
pub fn reflection_line_rolloff(frequency: f64, resonance_frequency: f64) -> Result<f64> {
    if !(resonance_frequency > 0.0) {
        return Err(Error::domain("resonance frequency must be > 0"));
    }
    if !(frequency > 0.0 && frequency <= 2.0 * resonance_frequency) {
        return Err(Error::domain(
            "rolloff model is defined for 0 < frequency <= 2 * resonance frequency",
        ));
    }
    Ok((std::f64::consts::PI * frequency / (2.0 * resonance_frequency)).sin())
}
