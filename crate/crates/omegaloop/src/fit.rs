//! Resonator parameter extraction from S-parameter magnitude traces.
//!
//! The estimator fits the lineshapes of [`crate::resnet`] to measured (or
//! digitized) magnitudes and returns resonance frequency, unloaded Q, and
//! coupling, with uncertainties when the data support them. Phase is
//! ignored throughout: digitized plots and scalar analyzers carry none,
//! and the magnitude already determines the parameters up to one known
//! ambiguity in reflection (see [`CouplingBranch`]).
//!
//! Fitting runs inside a frequency window around the resonance so that
//! neighbouring modes and connector ripple do not bias the result. The
//! window defaults to 35 percent of the resonance estimate on each side,
//! which comfortably covers loaded bandwidths up to Q of a few while
//! staying inside a typical octave-spaced mode spectrum.
//!
//! [`synthesize`] generates traces from known parameters, optionally with
//! a reproducible complex noise floor, closing the loop for round-trip
//! tests and for generating fixture files.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lm::{least_squares, LmOptions};
use crate::resnet::{one_port_response, two_port_response, Mode, ResonatorParams};
use crate::sparams::SParamTrace;

/// Floor applied when converting magnitudes to decibels, so that an exact
/// zero stays finite. Far below any realistic instrument floor.
const DB_FLOOR: f64 = -300.0;

/// Space in which residuals are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObjectiveSpace {
    /// Fit 20 log10 magnitudes. Deep dips and the skirt get comparable
    /// weight, which suits data spanning a large dynamic range. Default.
    #[default]
    Decibel,
    /// Fit linear magnitudes. The near-unity region dominates, which can
    /// be preferable when the dip bottom is noise-limited.
    LinearMagnitude,
}

/// Which of the two magnitude-identical reflection solutions to report.
///
/// A one-port magnitude trace cannot distinguish coupling beta from
/// 1/beta: the pair (Q0, beta) and (Q0/beta, 1/beta) produce exactly the
/// same |S11| at every frequency. Phase would resolve this, but magnitude
/// data need outside knowledge, usually whether the dip deepens or
/// shallows as the coupling gap is widened. Transmission fits are not
/// affected, so there the branch setting is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingBranch {
    #[default]
    Overcoupled,
    Undercoupled,
}

/// Fit controls. `Default` gives the settings used throughout the
/// examples: decibel objective, overcoupled branch, no baseline, window
/// of 0.35 nu0 on each side.
#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    /// Half-widths (below, above) of the fit window in Hz, taken around
    /// the resonance estimate. `None` selects 0.35 times the estimate on
    /// each side.
    pub window: Option<(f64, f64)>,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub objective_space: ObjectiveSpace,
    /// Also fit a common amplitude offset in dB, absorbing cable loss and
    /// calibration drift. The offset applies to every channel.
    pub amplitude_baseline: bool,
    /// Reflection branch to report; see [`CouplingBranch`].
    pub branch: CouplingBranch,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            window: None,
            max_iterations: 200,
            tolerance: 1e-10,
            objective_space: ObjectiveSpace::default(),
            amplitude_baseline: false,
            branch: CouplingBranch::default(),
        }
    }
}

/// One-sigma parameter uncertainties from the fit covariance.
#[derive(Debug, Clone, Copy)]
pub struct ParameterUncertainties {
    pub resonance_frequency: f64,
    pub unloaded_q: f64,
    pub coupling: f64,
}

/// Outcome of a fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: ResonatorParams,
    /// Fitted amplitude offset, present when the config asked for one.
    pub baseline_db: Option<f64>,
    /// Root-mean-square residual in the objective space (dB or linear).
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Present when the residual count exceeds the parameter count and
    /// the normal equations were invertible.
    pub parameter_uncertainties: Option<ParameterUncertainties>,
}

/// Reproducible complex noise floor for [`synthesize`].
#[derive(Debug, Clone, Copy)]
pub struct NoiseSpec {
    /// Noise power relative to full scale, as 20 log10 of the expected
    /// magnitude. -60 means each sample gains a complex perturbation of
    /// rms magnitude 1e-3.
    pub floor_db: f64,
    pub seed: u64,
}

fn observe(magnitude: f64, space: ObjectiveSpace) -> f64 {
    match space {
        ObjectiveSpace::Decibel => {
            if magnitude > 0.0 {
                (20.0 * magnitude.log10()).max(DB_FLOOR)
            } else {
                DB_FLOOR
            }
        }
        ObjectiveSpace::LinearMagnitude => magnitude,
    }
}

fn predicted(magnitude: f64, baseline_db: f64, space: ObjectiveSpace) -> f64 {
    match space {
        ObjectiveSpace::Decibel => observe(magnitude, space) + baseline_db,
        ObjectiveSpace::LinearMagnitude => magnitude * 10f64.powf(baseline_db / 20.0),
    }
}

/// Estimate starting parameters from a trace without iterating.
///
/// The resonance is located at the global reflection minimum; an estimate
/// on the first or last sample means the resonance is outside the span
/// and is reported as [`Error::NoResonance`]. Coupling comes from the
/// on-resonance level, Q from the half-height width of the transmitted
/// power (transmission) or of the absorbed fraction (reflection).
/// Reflection estimates always land on the overcoupled branch.
pub fn initial_guess(trace: &SParamTrace, mode: Mode) -> Result<ResonatorParams> {
    if trace.len() < 5 {
        return Err(Error::domain("too few points to locate a resonance"));
    }
    let mut idx = 0usize;
    let mut dip = f64::INFINITY;
    for (i, s) in trace.s11.iter().enumerate() {
        let m = s.norm();
        if m < dip {
            dip = m;
            idx = i;
        }
    }
    if idx == 0 || idx == trace.len() - 1 {
        return Err(Error::NoResonance(
            "reflection minimum sits on the span edge".into(),
        ));
    }
    let f0 = trace.frequencies[idx];
    match mode {
        Mode::Transmission => {
            let tp = trace
                .two_port
                .as_ref()
                .ok_or_else(|| Error::domain("transmission estimates need a two-port trace"))?;
            let t_pk = tp.s21[idx].norm().min(1.0 - 1e-9);
            let beta = (t_pk / (2.0 * (1.0 - t_pk))).clamp(1e-6, 1e3);
            let power: Vec<f64> = tp.s21.iter().map(|s| s.norm_sqr()).collect();
            let width = half_height_width(&trace.frequencies, &power, idx);
            let q0 = ((1.0 + 2.0 * beta) * f0 / width).clamp(1.0, 1e9);
            ResonatorParams::new(f0, q0, beta, mode)
        }
        Mode::Reflection => {
            let gamma0 = dip.min(1.0 - 1e-9);
            let beta = ((1.0 + gamma0) / (1.0 - gamma0)).min(1e3);
            let absorbed: Vec<f64> = trace
                .s11
                .iter()
                .map(|s| (1.0 - s.norm_sqr()).max(0.0))
                .collect();
            let width = half_height_width(&trace.frequencies, &absorbed, idx);
            let q0 = ((1.0 + beta) * f0 / width).clamp(1.0, 1e9);
            ResonatorParams::new(f0, q0, beta, mode)
        }
    }
}

/// Width of `height` at half its peak value, interpolated between samples.
/// A side that never crosses is mirrored from the other; if neither side
/// crosses, a tenth of the span stands in so the caller still gets a
/// usable (if crude) starting point.
fn half_height_width(freqs: &[f64], height: &[f64], peak: usize) -> f64 {
    let half = height[peak] / 2.0;
    let cross = |i: usize, j: usize| -> f64 {
        let d = height[i] - height[j];
        let t = if d > 0.0 { (height[i] - half) / d } else { 1.0 };
        freqs[i] + t * (freqs[j] - freqs[i])
    };
    let mut right = None;
    for i in peak..height.len() - 1 {
        if height[i + 1] <= half {
            right = Some(cross(i, i + 1));
            break;
        }
    }
    let mut left = None;
    for i in (1..=peak).rev() {
        if height[i - 1] <= half {
            left = Some(cross(i, i - 1));
            break;
        }
    }
    let f0 = freqs[peak];
    match (left, right) {
        (Some(l), Some(r)) => r - l,
        (Some(l), None) => 2.0 * (f0 - l),
        (None, Some(r)) => 2.0 * (r - f0),
        (None, None) => (freqs[freqs.len() - 1] - freqs[0]) / 10.0,
    }
}

fn window_indices(
    trace: &SParamTrace,
    center: f64,
    window: Option<(f64, f64)>,
) -> Result<Vec<usize>> {
    let (below, above) = window.unwrap_or((0.35 * center, 0.35 * center));
    if !(below > 0.0 && above > 0.0) {
        return Err(Error::domain("window half-widths must be > 0"));
    }
    let lo = center - below;
    let hi = center + above;
    let idx: Vec<usize> = trace
        .frequencies
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f >= lo && f <= hi)
        .map(|(i, _)| i)
        .collect();
    if idx.len() < 5 {
        return Err(Error::domain(
            "fewer than 5 trace points fall in the fit window",
        ));
    }
    Ok(idx)
}

/// Model-minus-data residuals over prepared per-window arrays. `d21` is
/// present for transmission fits only.
fn eval_residuals(
    params: &ResonatorParams,
    baseline_db: f64,
    freqs: &[f64],
    d11: &[f64],
    d21: Option<&[f64]>,
    space: ObjectiveSpace,
) -> Vec<f64> {
    let channels = if d21.is_some() { 2 } else { 1 };
    let mut out = Vec::with_capacity(freqs.len() * channels);
    for (k, &f) in freqs.iter().enumerate() {
        match params.mode {
            Mode::Transmission => {
                let sp = match two_port_response(params, f) {
                    Ok(sp) => sp,
                    Err(_) => {
                        out.resize(freqs.len() * channels, f64::INFINITY);
                        return out;
                    }
                };
                out.push(predicted(sp.gamma.norm(), baseline_db, space) - d11[k]);
                out.push(
                    predicted(sp.t.expect("two-port carries t").norm(), baseline_db, space)
                        - d21.expect("transmission data carries s21")[k],
                );
            }
            Mode::Reflection => {
                let gamma = match one_port_response(params, f) {
                    Ok(g) => g,
                    Err(_) => {
                        out.resize(freqs.len(), f64::INFINITY);
                        return out;
                    }
                };
                out.push(predicted(gamma.norm(), baseline_db, space) - d11[k]);
            }
        }
    }
    out
}

struct WindowedData {
    freqs: Vec<f64>,
    d11: Vec<f64>,
    d21: Option<Vec<f64>>,
}

fn windowed_data(
    trace: &SParamTrace,
    mode: Mode,
    center: f64,
    config: &FitConfig,
) -> Result<WindowedData> {
    if mode == Mode::Transmission && trace.two_port.is_none() {
        return Err(Error::domain("transmission fits need a two-port trace"));
    }
    let idx = window_indices(trace, center, config.window)?;
    let space = config.objective_space;
    let freqs: Vec<f64> = idx.iter().map(|&i| trace.frequencies[i]).collect();
    let d11: Vec<f64> = idx
        .iter()
        .map(|&i| observe(trace.s11[i].norm(), space))
        .collect();
    let d21 = match mode {
        Mode::Transmission => {
            let tp = trace.two_port.as_ref().expect("checked above");
            Some(
                idx.iter()
                    .map(|&i| observe(tp.s21[i].norm(), space))
                    .collect(),
            )
        }
        Mode::Reflection => None,
    };
    Ok(WindowedData { freqs, d11, d21 })
}

/// Fit the two-port (transmission) model to a trace. Needs both S11 and
/// S21; the branch setting is ignored because the transmitted level fixes
/// the coupling unambiguously.
pub fn fit_transmission(trace: &SParamTrace, config: &FitConfig) -> Result<FitResult> {
    fit_impl(trace, Mode::Transmission, config)
}

/// Fit the one-port (reflection) model to a trace. Uses S11 only, so it
/// also accepts two-port traces. The reported coupling follows
/// `config.branch`.
pub fn fit_reflection(trace: &SParamTrace, config: &FitConfig) -> Result<FitResult> {
    fit_impl(trace, Mode::Reflection, config)
}

fn fit_impl(trace: &SParamTrace, mode: Mode, config: &FitConfig) -> Result<FitResult> {
    let guess = initial_guess(trace, mode)?;
    let f_ref = guess.resonance_frequency;
    let data = windowed_data(trace, mode, f_ref, config)?;
    let space = config.objective_space;
    let with_baseline = config.amplitude_baseline;

    // Dimensionless, log-scaled parameters keep the step sizes and the
    // convergence test meaningful across nine orders of magnitude in Hz.
    let mut x0 = vec![1.0, guess.unloaded_q.ln(), guess.coupling.ln()];
    if with_baseline {
        x0.push(0.0);
    }
    let n_res = data.freqs.len() * if data.d21.is_some() { 2 } else { 1 };

    let residuals = |x: &[f64]| -> Vec<f64> {
        let f0 = x[0] * f_ref;
        let q0 = x[1].exp();
        let beta = x[2].exp();
        let baseline = if with_baseline { x[3] } else { 0.0 };
        if !(f0 > 0.0 && q0.is_finite() && beta.is_finite() && beta > 0.0) {
            return vec![f64::INFINITY; n_res];
        }
        let trial = ResonatorParams {
            resonance_frequency: f0,
            unloaded_q: q0,
            coupling: beta,
            mode,
        };
        eval_residuals(
            &trial,
            baseline,
            &data.freqs,
            &data.d11,
            data.d21.as_deref(),
            space,
        )
    };

    let opts = LmOptions {
        max_iterations: config.max_iterations,
        tolerance: config.tolerance,
    };
    let outcome = least_squares(residuals, &x0, &opts)?;

    let mut f0 = outcome.params[0] * f_ref;
    let mut q0 = outcome.params[1].exp();
    let mut beta = outcome.params[2].exp();
    let baseline_db = if with_baseline {
        Some(outcome.params[3])
    } else {
        None
    };

    let mut variances = outcome.covariance.as_ref().map(|c| {
        (
            c[0][0] * f_ref * f_ref,
            c[1][1], // var of ln Q0
            c[2][2], // var of ln beta
            c[1][2],
        )
    });

    if mode == Mode::Reflection {
        let want_over = config.branch == CouplingBranch::Overcoupled;
        if want_over != (beta >= 1.0) {
            // Jump to the magnitude-identical twin: Q0 -> Q0/beta,
            // beta -> 1/beta. In log space that is a linear map, so the
            // covariance follows exactly.
            q0 /= beta;
            beta = 1.0 / beta;
            if let Some((vf, vq, vb, cqb)) = variances {
                variances = Some((vf, vq + vb - 2.0 * cqb, vb, cqb));
            }
        }
        let _ = f0; // resonance frequency is branch-independent
    }

    let parameter_uncertainties = variances.map(|(vf, vq, vb, _)| ParameterUncertainties {
        resonance_frequency: vf.max(0.0).sqrt(),
        unloaded_q: q0 * vq.max(0.0).sqrt(),
        coupling: beta * vb.max(0.0).sqrt(),
    });

    if !(f0 > 0.0) {
        f0 = f_ref;
    }
    let params = ResonatorParams::new(f0, q0, beta, mode)?;
    Ok(FitResult {
        params,
        baseline_db,
        residual_rms: (outcome.ssr / n_res as f64).sqrt(),
        iterations: outcome.iterations,
        converged: outcome.converged,
        parameter_uncertainties,
    })
}

/// Root-mean-square misfit of given parameters against a trace, windowed
/// around `params.resonance_frequency` with the config's window and
/// evaluated in its objective space. Lets callers compare candidate
/// parameter sets (or branches) on equal footing.
pub fn residual_rms(
    params: &ResonatorParams,
    baseline_db: Option<f64>,
    trace: &SParamTrace,
    config: &FitConfig,
) -> Result<f64> {
    let data = windowed_data(trace, params.mode, params.resonance_frequency, config)?;
    let res = eval_residuals(
        params,
        baseline_db.unwrap_or(0.0),
        &data.freqs,
        &data.d11,
        data.d21.as_deref(),
        config.objective_space,
    );
    let ssr: f64 = res.iter().map(|r| r * r).sum();
    Ok((ssr / res.len() as f64).sqrt())
}

fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // Box-Muller; 1 - u keeps the argument of ln strictly positive.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Generate a trace from known parameters on a uniform grid, optionally
/// adding a complex Gaussian noise floor. Transmission parameters yield a
/// symmetric reciprocal two-port (S12 = S21, S22 = S11, preserved even
/// with noise); reflection parameters yield a one-port. The reference
/// impedance is recorded as 50 ohms.
pub fn synthesize(
    params: &ResonatorParams,
    start: f64,
    stop: f64,
    points: usize,
    noise: Option<&NoiseSpec>,
) -> Result<SParamTrace> {
    if !(start > 0.0 && stop > start) {
        return Err(Error::domain("need 0 < start < stop"));
    }
    if points < 2 {
        return Err(Error::domain("need at least 2 points"));
    }
    let step = (stop - start) / (points - 1) as f64;
    let frequencies: Vec<f64> = (0..points).map(|i| start + step * i as f64).collect();
    let mut s11 = Vec::with_capacity(points);
    let mut s21 = Vec::with_capacity(points);
    for &f in &frequencies {
        match params.mode {
            Mode::Transmission => {
                let sp = two_port_response(params, f)?;
                s11.push(sp.gamma);
                s21.push(sp.t.expect("two-port carries t"));
            }
            Mode::Reflection => {
                s11.push(one_port_response(params, f)?);
            }
        }
    }
    if let Some(spec) = noise {
        let sigma = 10f64.powf(spec.floor_db / 20.0) / std::f64::consts::SQRT_2;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for s in s11.iter_mut() {
            let (a, b) = gaussian_pair(&mut rng);
            *s += Complex64::new(sigma * a, sigma * b);
        }
        for s in s21.iter_mut() {
            let (a, b) = gaussian_pair(&mut rng);
            *s += Complex64::new(sigma * a, sigma * b);
        }
    }
    match params.mode {
        Mode::Transmission => {
            let s12 = s21.clone();
            let s22 = s11.clone();
            SParamTrace::two_port(frequencies, s11, s21, s12, s22, 50.0)
        }
        Mode::Reflection => SParamTrace::one_port(frequencies, s11, 50.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tx_params() -> ResonatorParams {
        ResonatorParams::new(2.93e9, 74.0, 11.5, Mode::Transmission).unwrap()
    }

    fn rx_params() -> ResonatorParams {
        ResonatorParams::new(2.93e9, 92.0, 8.3, Mode::Reflection).unwrap()
    }

    #[test]
    fn synthesize_grid_and_symmetry() {
        let trace = synthesize(&tx_params(), 1e9, 5e9, 401, None).unwrap();
        assert_eq!(trace.len(), 401);
        assert_relative_eq!(trace.frequencies[0], 1e9);
        assert_relative_eq!(trace.frequencies[400], 5e9, max_relative = 1e-12);
        let tp = trace.two_port.as_ref().unwrap();
        assert_eq!(tp.s12, tp.s21);
        assert_eq!(tp.s22, trace.s11);

        let one = synthesize(&rx_params(), 1e9, 5e9, 11, None).unwrap();
        assert_eq!(one.ports(), 1);

        assert!(synthesize(&tx_params(), 0.0, 5e9, 11, None).is_err());
        assert!(synthesize(&tx_params(), 2e9, 1e9, 11, None).is_err());
        assert!(synthesize(&tx_params(), 1e9, 5e9, 1, None).is_err());
    }

    #[test]
    fn synthesize_noise_is_seeded_and_sized() {
        let clean = synthesize(&tx_params(), 1e9, 5e9, 801, None).unwrap();
        let spec = NoiseSpec {
            floor_db: -60.0,
            seed: 11,
        };
        let a = synthesize(&tx_params(), 1e9, 5e9, 801, Some(&spec)).unwrap();
        let b = synthesize(&tx_params(), 1e9, 5e9, 801, Some(&spec)).unwrap();
        assert_eq!(a, b);
        let c = synthesize(
            &tx_params(),
            1e9,
            5e9,
            801,
            Some(&NoiseSpec {
                floor_db: -60.0,
                seed: 12,
            }),
        )
        .unwrap();
        assert_ne!(a, c);
        // the added perturbation has rms magnitude near the floor
        let ms: f64 = a
            .s11
            .iter()
            .zip(&clean.s11)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            / 801.0;
        let rms_db = 10.0 * ms.log10();
        assert!(
            (rms_db + 60.0).abs() < 1.0,
            "noise rms {rms_db} dB, expected -60"
        );
    }

    #[test]
    fn guess_lands_within_twenty_percent() {
        let trace = synthesize(&tx_params(), 1e9, 5e9, 801, None).unwrap();
        let g = initial_guess(&trace, Mode::Transmission).unwrap();
        assert!((g.resonance_frequency - 2.93e9).abs() < 6e6);
        assert!((g.unloaded_q - 74.0).abs() / 74.0 < 0.2);
        assert!((g.coupling - 11.5).abs() / 11.5 < 0.2);

        let trace = synthesize(&rx_params(), 1e9, 5e9, 801, None).unwrap();
        let g = initial_guess(&trace, Mode::Reflection).unwrap();
        assert!((g.unloaded_q - 92.0).abs() / 92.0 < 0.2);
        assert!((g.coupling - 8.3).abs() / 8.3 < 0.2);
    }

    #[test]
    fn guess_flags_missing_resonance() {
        // monotone |S11|: minimum sits on the last sample
        let freqs: Vec<f64> = (0..50).map(|i| 1e9 + 1e7 * i as f64).collect();
        let s11: Vec<Complex64> = (0..50)
            .map(|i| Complex64::new(1.0 - 0.01 * i as f64, 0.0))
            .collect();
        let trace = SParamTrace::one_port(freqs, s11, 50.0).unwrap();
        assert!(matches!(
            initial_guess(&trace, Mode::Reflection),
            Err(Error::NoResonance(_))
        ));
    }

    #[test]
    fn noiseless_transmission_fit_recovers_truth() {
        let truth = tx_params();
        let trace = synthesize(&truth, 1e9, 5e9, 801, None).unwrap();
        for space in [ObjectiveSpace::Decibel, ObjectiveSpace::LinearMagnitude] {
            let config = FitConfig {
                objective_space: space,
                ..FitConfig::default()
            };
            let fit = fit_transmission(&trace, &config).unwrap();
            assert!(fit.converged, "space {space:?}");
            assert_relative_eq!(
                fit.params.resonance_frequency,
                2.93e9,
                max_relative = 1e-3
            );
            assert_relative_eq!(fit.params.unloaded_q, 74.0, max_relative = 1e-3);
            assert_relative_eq!(fit.params.coupling, 11.5, max_relative = 1e-3);
            assert!(fit.residual_rms < 1e-6);
        }
    }

    #[test]
    fn noiseless_reflection_fit_recovers_truth() {
        let truth = rx_params();
        let trace = synthesize(&truth, 1e9, 5e9, 801, None).unwrap();
        let fit = fit_reflection(&trace, &FitConfig::default()).unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.params.resonance_frequency, 2.93e9, max_relative = 1e-3);
        assert_relative_eq!(fit.params.unloaded_q, 92.0, max_relative = 1e-3);
        assert_relative_eq!(fit.params.coupling, 8.3, max_relative = 1e-3);
    }

    #[test]
    fn reflection_branches_are_magnitude_twins() {
        let truth = rx_params();
        let trace = synthesize(&truth, 1e9, 5e9, 801, None).unwrap();
        let over = fit_reflection(&trace, &FitConfig::default()).unwrap();
        let under = fit_reflection(
            &trace,
            &FitConfig {
                branch: CouplingBranch::Undercoupled,
                ..FitConfig::default()
            },
        )
        .unwrap();
        assert_relative_eq!(
            under.params.coupling,
            1.0 / over.params.coupling,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            under.params.unloaded_q,
            over.params.unloaded_q / over.params.coupling,
            max_relative = 1e-9
        );
        // both describe the data equally well
        let r_over = residual_rms(&over.params, None, &trace, &FitConfig::default()).unwrap();
        let r_under = residual_rms(&under.params, None, &trace, &FitConfig::default()).unwrap();
        assert!((r_over - r_under).abs() < 1e-12);
    }

    #[test]
    fn undercoupled_hint_recovers_weak_coupling() {
        let truth = ResonatorParams::new(2.93e9, 92.0, 0.12, Mode::Reflection).unwrap();
        let trace = synthesize(&truth, 1e9, 5e9, 801, None).unwrap();
        let fit = fit_reflection(
            &trace,
            &FitConfig {
                branch: CouplingBranch::Undercoupled,
                ..FitConfig::default()
            },
        )
        .unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.params.coupling, 0.12, max_relative = 1e-2);
        assert_relative_eq!(fit.params.unloaded_q, 92.0, max_relative = 1e-2);
    }

    #[test]
    fn matched_resonator_in_noise_stays_near_unity_coupling() {
        let truth = ResonatorParams::new(2.93e9, 74.0, 1.0, Mode::Reflection).unwrap();
        let noise = NoiseSpec {
            floor_db: -80.0,
            seed: 7,
        };
        let trace = synthesize(&truth, 1e9, 5e9, 801, Some(&noise)).unwrap();
        let fit = fit_reflection(&trace, &FitConfig::default()).unwrap();
        assert!(fit.params.coupling > 0.95 && fit.params.coupling < 1.05);
        assert_relative_eq!(fit.params.unloaded_q, 74.0, max_relative = 0.05);
    }

    #[test]
    fn noisy_transmission_errors_stay_small_across_seeds() {
        let truth = tx_params();
        let mut q_errs = Vec::new();
        let mut b_errs = Vec::new();
        for seed in 0..10 {
            let noise = NoiseSpec {
                floor_db: -60.0,
                seed,
            };
            let trace = synthesize(&truth, 1e9, 5e9, 801, Some(&noise)).unwrap();
            let fit = fit_transmission(&trace, &FitConfig::default()).unwrap();
            q_errs.push((fit.params.unloaded_q - 74.0).abs() / 74.0);
            b_errs.push((fit.params.coupling - 11.5).abs() / 11.5);
        }
        q_errs.sort_by(f64::total_cmp);
        b_errs.sort_by(f64::total_cmp);
        assert!(q_errs[q_errs.len() / 2] < 0.05, "median q err {q_errs:?}");
        assert!(b_errs[b_errs.len() / 2] < 0.05, "median beta err {b_errs:?}");
    }

    #[test]
    fn uncertainties_reported_on_noisy_fits() {
        let truth = tx_params();
        let noise = NoiseSpec {
            floor_db: -60.0,
            seed: 3,
        };
        let trace = synthesize(&truth, 1e9, 5e9, 801, Some(&noise)).unwrap();
        let fit = fit_transmission(&trace, &FitConfig::default()).unwrap();
        let u = fit.parameter_uncertainties.unwrap();
        assert!(u.resonance_frequency > 0.0 && u.resonance_frequency < 0.01 * 2.93e9);
        assert!(u.unloaded_q > 0.0 && u.unloaded_q < 0.2 * 74.0);
        assert!(u.coupling > 0.0 && u.coupling < 0.2 * 11.5);
    }

    #[test]
    fn baseline_offset_is_absorbed_and_reported() {
        let truth = tx_params();
        let mut trace = synthesize(&truth, 1e9, 5e9, 801, None).unwrap();
        let scale = 10f64.powf(-3.0 / 20.0);
        for s in trace.s11.iter_mut() {
            *s *= scale;
        }
        let tp = trace.two_port.as_mut().unwrap();
        for s in tp.s21.iter_mut() {
            *s *= scale;
        }
        let fit = fit_transmission(
            &trace,
            &FitConfig {
                amplitude_baseline: true,
                ..FitConfig::default()
            },
        )
        .unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.baseline_db.unwrap(), -3.0, max_relative = 1e-3);
        assert_relative_eq!(fit.params.unloaded_q, 74.0, max_relative = 1e-3);
        assert_relative_eq!(fit.params.coupling, 11.5, max_relative = 1e-3);
    }

    #[test]
    fn fit_is_scale_invariant() {
        let hi = tx_params();
        let lo = ResonatorParams::new(2.93e8, 74.0, 11.5, Mode::Transmission).unwrap();
        let t_hi = synthesize(&hi, 1e9, 5e9, 801, None).unwrap();
        let t_lo = synthesize(&lo, 1e8, 5e8, 801, None).unwrap();
        let f_hi = fit_transmission(&t_hi, &FitConfig::default()).unwrap();
        let f_lo = fit_transmission(&t_lo, &FitConfig::default()).unwrap();
        assert_relative_eq!(
            f_hi.params.resonance_frequency,
            10.0 * f_lo.params.resonance_frequency,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            f_hi.params.unloaded_q,
            f_lo.params.unloaded_q,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            f_hi.params.coupling,
            f_lo.params.coupling,
            max_relative = 1e-9
        );
    }

    #[test]
    fn residual_rms_is_zero_at_truth_and_grows_away() {
        let truth = tx_params();
        let trace = synthesize(&truth, 1e9, 5e9, 801, None).unwrap();
        let config = FitConfig::default();
        let at_truth = residual_rms(&truth, None, &trace, &config).unwrap();
        assert!(at_truth < 1e-12);
        let off =
            ResonatorParams::new(2.93e9, 74.0 * 1.05, 11.5, Mode::Transmission).unwrap();
        assert!(residual_rms(&off, None, &trace, &config).unwrap() > at_truth + 1e-3);
        let off =
            ResonatorParams::new(2.93e9, 74.0, 11.5 * 0.95, Mode::Transmission).unwrap();
        assert!(residual_rms(&off, None, &trace, &config).unwrap() > at_truth + 1e-3);
    }

    #[test]
    fn objective_spaces_weight_misfit_differently() {
        let truth = tx_params();
        let noise = NoiseSpec {
            floor_db: -40.0,
            seed: 5,
        };
        let trace = synthesize(&truth, 1e9, 5e9, 801, Some(&noise)).unwrap();
        let db = residual_rms(&truth, None, &trace, &FitConfig::default()).unwrap();
        let lin = residual_rms(
            &truth,
            None,
            &trace,
            &FitConfig {
                objective_space: ObjectiveSpace::LinearMagnitude,
                ..FitConfig::default()
            },
        )
        .unwrap();
        assert!(db > 10.0 * lin, "db {db}, linear {lin}");
    }

    #[test]
    fn windowing_rejects_a_neighbouring_mode() {
        // crude two-mode superposition: a second resonance above the span
        // of interest contaminates the skirt of the first
        let m1 = tx_params();
        let m2 = ResonatorParams::new(5.8e9, 100.0, 0.3, Mode::Transmission).unwrap();
        let points = 1401;
        let step = (8e9 - 1e9) / (points - 1) as f64;
        let mut freqs = Vec::with_capacity(points);
        let mut s11 = Vec::with_capacity(points);
        let mut s21 = Vec::with_capacity(points);
        for i in 0..points {
            let f = 1e9 + step * i as f64;
            let a = two_port_response(&m1, f).unwrap();
            let b = two_port_response(&m2, f).unwrap();
            freqs.push(f);
            // off-resonance each mode reflects fully (gamma -> -1), so one
            // of the two -1 offsets must be removed from the sum
            s11.push(a.gamma + b.gamma + Complex64::new(1.0, 0.0));
            s21.push(a.t.unwrap() + b.t.unwrap());
        }
        let s12 = s21.clone();
        let s22 = s11.clone();
        let trace = SParamTrace::two_port(freqs, s11, s21, s12, s22, 50.0).unwrap();

        let wide = FitConfig {
            window: Some((2.0e9, 5.2e9)),
            ..FitConfig::default()
        };
        let full = fit_transmission(&trace, &wide).unwrap();
        let q_err_full = (full.params.unloaded_q - 74.0).abs() / 74.0;

        let windowed = fit_transmission(&trace, &FitConfig::default()).unwrap();
        let q_err_win = (windowed.params.unloaded_q - 74.0).abs() / 74.0;
        let b_err_win = (windowed.params.coupling - 11.5).abs() / 11.5;

        assert!(
            q_err_full > 0.01,
            "full-span fit should be biased, err {q_err_full}"
        );
        assert!(q_err_win < 0.01, "windowed q err {q_err_win}");
        assert!(b_err_win < 0.01, "windowed beta err {b_err_win}");
        assert!(q_err_win < q_err_full);
    }

    #[test]
    fn window_and_trace_validation() {
        let trace = synthesize(&tx_params(), 1e9, 5e9, 801, None).unwrap();
        // degenerate window
        assert!(fit_transmission(
            &trace,
            &FitConfig {
                window: Some((0.0, 1e9)),
                ..FitConfig::default()
            }
        )
        .is_err());
        // window so narrow nothing falls inside
        assert!(fit_transmission(
            &trace,
            &FitConfig {
                window: Some((1e3, 1e3)),
                ..FitConfig::default()
            }
        )
        .is_err());
        // transmission fit on a one-port trace
        let one = synthesize(&rx_params(), 1e9, 5e9, 801, None).unwrap();
        assert!(fit_transmission(&one, &FitConfig::default()).is_err());
        // reflection fit runs fine on a two-port trace
        assert!(fit_reflection(&trace, &FitConfig::default()).is_ok());
    }
}
