//! End-to-end design evaluation: geometry in, performance report out.
//!
//! [`evaluate_design`] composes the transmission-line, resonator, field,
//! NV, and optics models into one report in the style of a datasheet
//! table. Every number in the report carries a provenance note saying
//! whether it is a pure closed form (analytic), a closed form times an
//! empirical derating (derated), or an input that cannot be derived here
//! (external). The unloaded Q is always external: it is dominated by
//! conduction losses that this analytic model does not attempt.
//!
//! The resonator impedance enters twice. The wide-strip width formula
//! gives one estimate; electromagnetic solvers or measurements give
//! another (for the reference design, 10.4 ohm instead of 8.5). Both
//! routes flow through the whole report as parallel columns so the spread
//! between them is visible instead of hidden behind a choice.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{self, FieldEfficiency, LoopSpec, Provenance};
use crate::nvphys::{self, NVConfig};
use crate::optics;
use crate::resnet::{self, Mode, ResonatorParams};
use crate::txline::{self, MicrostripSection, SubstrateSpec};

/// Feed-line impedance assumed when none is given, ohm.
pub const NOMINAL_LINE_IMPEDANCE: f64 = 50.0;

/// Planar geometry of the loop resonator board.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonatorGeometry {
    /// Feed line width W_L, m.
    pub feed_width: f64,
    /// Resonator strip width W_R, m.
    pub resonator_width: f64,
    /// Resonator strip length L, m.
    pub length: f64,
    /// Coupling gap G between feed and resonator, m.
    pub gap: f64,
    /// The loop termination at the resonator end.
    pub drive_loop: LoopSpec,
    /// Optical access hole diameter through the board, m.
    pub optical_hole: f64,
    pub substrate: SubstrateSpec,
    /// Effective length added by the loop and gap discontinuities, m.
    pub loading_length: f64,
}

impl ResonatorGeometry {
    pub fn new(
        feed_width: f64,
        resonator_width: f64,
        length: f64,
        gap: f64,
        drive_loop: LoopSpec,
        optical_hole: f64,
        substrate: SubstrateSpec,
        loading_length: f64,
    ) -> Result<Self> {
        if !(feed_width > 0.0 && resonator_width > 0.0 && length > 0.0 && gap > 0.0) {
            return Err(Error::domain("geometry dimensions must be > 0"));
        }
        if !(optical_hole > 0.0) {
            return Err(Error::domain("optical hole diameter must be > 0"));
        }
        if optical_hole >= drive_loop.inner_diameter {
            return Err(Error::domain(
                "optical hole must be smaller than the loop opening",
            ));
        }
        if !(loading_length > 0.0) {
            return Err(Error::domain("loading length must be > 0"));
        }
        Ok(ResonatorGeometry {
            feed_width,
            resonator_width,
            length,
            gap,
            drive_loop,
            optical_hole,
            substrate,
            loading_length,
        })
    }

    /// The design point used throughout the examples: 0.3 mm feed into a
    /// 3 mm x 17 mm resonator strip with a 0.1 mm gap, 0.4 mm loop with a
    /// 0.3 mm optical hole, on the reference substrate.
    pub fn reference() -> Self {
        ResonatorGeometry {
            feed_width: 0.3e-3,
            resonator_width: 3.0e-3,
            length: 17.0e-3,
            gap: 0.1e-3,
            drive_loop: LoopSpec::reference(),
            optical_hole: 0.3e-3,
            substrate: SubstrateSpec::reference(),
            loading_length: txline::DEFAULT_LOADING_LENGTH,
        }
    }

    fn resonator_section(&self) -> Result<MicrostripSection> {
        MicrostripSection::new(self.resonator_width, self.length, self.substrate.clone())
    }
}

/// Inputs to [`evaluate_design`] that are not geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignOptions {
    /// Unloaded quality factor. There is no analytic route to it here, so
    /// it is an input; 74 is the simulated value for the reference board.
    pub q_unloaded: f64,
    /// Feed-line impedance, ohm.
    pub line_impedance: f64,
    /// Resonator impedance from an EM solver or a measurement, ohm. When
    /// present the report gains a second column computed from it.
    pub supplied_z_resonator: Option<f64>,
    /// Pulse length assumed for the power rows, s.
    pub pi_pulse_duration: f64,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions {
            q_unloaded: 74.0,
            line_impedance: NOMINAL_LINE_IMPEDANCE,
            supplied_z_resonator: None,
            pi_pulse_duration: 50e-9,
        }
    }
}

/// A number with its unit and a provenance note.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportedValue {
    pub value: f64,
    pub unit: String,
    pub note: String,
}

fn rv(value: f64, unit: &str, note: impl Into<String>) -> ReportedValue {
    ReportedValue {
        value,
        unit: unit.into(),
        note: note.into(),
    }
}

fn prov_word(p: Provenance) -> &'static str {
    match p {
        Provenance::AnalyticBound => "analytic",
        Provenance::Derated => "derated",
        Provenance::External => "external",
    }
}

fn rv_eff(eff: &FieldEfficiency, detail: &str) -> ReportedValue {
    rv(
        eff.value,
        "A/m/sqrt(W)",
        format!("{}: {}", prov_word(eff.provenance), detail),
    )
}

/// Everything downstream of one resonator-impedance estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignColumn {
    pub z_resonator: ReportedValue,
    pub coupling: ReportedValue,
    pub bandwidth_transmission: ReportedValue,
    pub bandwidth_reflection: ReportedValue,
    pub ringing_transmission: ReportedValue,
    pub ringing_reflection: ReportedValue,
    /// sqrt(Q0) peak-current route, per mode.
    pub efficiency_peak_transmission: ReportedValue,
    pub efficiency_peak_reflection: ReportedValue,
    /// Impedance-transformation (strong overcoupling) route, per mode.
    pub efficiency_impedance_transmission: ReportedValue,
    pub efficiency_impedance_reflection: ReportedValue,
    /// Power for a pi pulse of the configured length, from the
    /// impedance-route efficiency of each mode.
    pub pi_power_transmission: ReportedValue,
    pub pi_power_reflection: ReportedValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpticsSummary {
    pub full_cone_angle: ReportedValue,
    pub full_collection_efficiency: ReportedValue,
    pub hole_cone_angle: ReportedValue,
    pub hole_collection_efficiency: ReportedValue,
}

/// The design report. Serializes to JSON with stable (alphabetical) key
/// order; see [`crate::report`] for rendering helpers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub resonance_frequency: ReportedValue,
    pub q_unloaded: ReportedValue,
    pub line_impedance: ReportedValue,
    pub feed_strip_impedance: ReportedValue,
    pub pi_pulse_duration: ReportedValue,
    /// Bare feed line driving the same loop, the baseline all resonator
    /// numbers are compared against.
    pub line_efficiency: ReportedValue,
    pub pi_power_line: ReportedValue,
    pub by_strip_impedance: DesignColumn,
    pub by_supplied_impedance: Option<DesignColumn>,
    pub optics: OpticsSummary,
    /// What this analytic model deliberately does not predict.
    pub model_limits: Vec<String>,
}

fn column(
    f0: f64,
    q0: f64,
    z_line: f64,
    z_res: f64,
    z_note: &str,
    loop_spec: &LoopSpec,
    t_pi: f64,
) -> Result<DesignColumn> {
    let beta = resnet::coupling_from_impedances(q0, z_res, z_line)?;
    let tx = ResonatorParams::new(f0, q0, beta, Mode::Transmission)?;
    let rx = ResonatorParams::new(f0, q0, beta, Mode::Reflection)?;
    let bw_t = resnet::bandwidth(&tx);
    let bw_r = resnet::bandwidth(&rx);
    let nv = NVConfig::default();

    let peak_t = fields::resonant_efficiency(&tx, z_res, loop_spec)?;
    let peak_r = fields::resonant_efficiency(&rx, z_res, loop_spec)?;
    let imp_t = fields::high_beta_efficiency(Mode::Transmission, z_line, z_res, loop_spec)?;
    let imp_r = fields::high_beta_efficiency(Mode::Reflection, z_line, z_res, loop_spec)?;

    Ok(DesignColumn {
        z_resonator: rv(z_res, "ohm", z_note),
        coupling: rv(
            beta,
            "dimensionless",
            "analytic: Q0 Z_R / Z_L with this column's Z_R",
        ),
        bandwidth_transmission: rv(
            bw_t,
            "Hz",
            "analytic: loaded linewidth (1 + 2 beta) nu0 / Q0",
        ),
        bandwidth_reflection: rv(bw_r, "Hz", "analytic: loaded linewidth (1 + beta) nu0 / Q0"),
        ringing_transmission: rv(
            resnet::ringing_time(bw_t)?,
            "s",
            "analytic: 1 / (pi bandwidth)",
        ),
        ringing_reflection: rv(
            resnet::ringing_time(bw_r)?,
            "s",
            "analytic: 1 / (pi bandwidth)",
        ),
        efficiency_peak_transmission: rv_eff(
            &peak_t,
            "sqrt(Q0) peak-current route at this column's Z_R, transmission coupling",
        ),
        efficiency_peak_reflection: rv_eff(
            &peak_r,
            "sqrt(Q0) peak-current route at this column's Z_R, reflection coupling",
        ),
        efficiency_impedance_transmission: rv_eff(
            &imp_t,
            "impedance-transformation route Z_L/Z_R, transmission",
        ),
        efficiency_impedance_reflection: rv_eff(
            &imp_r,
            "impedance-transformation route Z_L/Z_R, reflection",
        ),
        pi_power_transmission: rv(
            nvphys::power_for_pi(t_pi, &imp_t, &nv)?,
            "W",
            "derated: inverse square of the impedance-route efficiency",
        ),
        pi_power_reflection: rv(
            nvphys::power_for_pi(t_pi, &imp_r, &nv)?,
            "W",
            "derated: inverse square of the impedance-route efficiency",
        ),
    })
}

/// Evaluate a geometry into a full performance report.
pub fn evaluate_design(geometry: &ResonatorGeometry, options: &DesignOptions) -> Result<DesignReport> {
    if !(options.q_unloaded > 0.0) {
        return Err(Error::domain("unloaded Q must be > 0"));
    }
    if !(options.line_impedance > 0.0) {
        return Err(Error::domain("line impedance must be > 0"));
    }
    if !(options.pi_pulse_duration > 0.0) {
        return Err(Error::domain("pi pulse duration must be > 0"));
    }
    let section = geometry.resonator_section()?;
    let f0 = txline::half_wave_frequency(&section, geometry.loading_length)?;
    let z_strip = txline::characteristic_impedance(&geometry.substrate, geometry.resonator_width)?;
    let feed_z = txline::characteristic_impedance(&geometry.substrate, geometry.feed_width)?;
    let q0 = options.q_unloaded;
    let z_line = options.line_impedance;
    let t_pi = options.pi_pulse_duration;
    let nv = NVConfig::default();

    let line_eff = fields::loop_efficiency(&geometry.drive_loop, z_line)?;
    let pi_line = nvphys::power_for_pi(t_pi, &line_eff, &nv)?;

    let by_strip = column(
        f0,
        q0,
        z_line,
        z_strip,
        "analytic: wide-strip width formula at the resonator width",
        &geometry.drive_loop,
        t_pi,
    )?;
    let by_supplied = match options.supplied_z_resonator {
        Some(z) => Some(column(
            f0,
            q0,
            z_line,
            z,
            "external: supplied resonator impedance (EM solver or measurement)",
            &geometry.drive_loop,
            t_pi,
        )?),
        None => None,
    };

    let stack = geometry.substrate.stack_thickness();
    let objective = optics::ObjectiveSpec::reference();
    let alpha_full = optics::cone_angle_from_na(&objective)?;
    let alpha_hole = optics::cone_angle_from_hole(geometry.optical_hole, stack)?;
    let optics_summary = OpticsSummary {
        full_cone_angle: rv(
            alpha_full.to_degrees(),
            "deg",
            "analytic: half-angle of the reference oil objective, asin(NA/n)",
        ),
        full_collection_efficiency: rv(
            optics::collection_efficiency(alpha_full)?,
            "fraction",
            "analytic: solid-angle fraction of the full objective cone",
        ),
        hole_cone_angle: rv(
            alpha_hole.to_degrees(),
            "deg",
            "analytic: cone admitted by the optical hole through the board stack",
        ),
        hole_collection_efficiency: rv(
            optics::collection_efficiency(alpha_hole)?,
            "fraction",
            "analytic: solid-angle fraction of the hole-limited cone",
        ),
    };

    Ok(DesignReport {
        resonance_frequency: rv(
            f0,
            "Hz",
            "analytic: microstrip half-wave with the calibrated loading length",
        ),
        q_unloaded: rv(
            q0,
            "dimensionless",
            "external: supplied input; conduction losses are not derived analytically",
        ),
        line_impedance: rv(z_line, "ohm", "external: nominal feed-line impedance"),
        feed_strip_impedance: rv(
            feed_z,
            "ohm",
            "analytic: wide-strip width formula at the feed width",
        ),
        pi_pulse_duration: rv(t_pi, "s", "external: pulse length the power rows assume"),
        line_efficiency: rv_eff(&line_eff, "bare line terminated by the loop"),
        pi_power_line: rv(
            pi_line,
            "W",
            "derated: inverse square of the bare-line efficiency",
        ),
        by_strip_impedance: by_strip,
        by_supplied_impedance: by_supplied,
        optics: optics_summary,
        model_limits: vec![
            "Q0 is an external input; conduction losses have no analytic route here.".into(),
            "EM field maps are not reproduced; the loop field is the derated ideal-loop value at the loop center.".into(),
            "Thermal rise under continuous drive is not modeled.".into(),
            "The RF-column field profile is only bracketed by the bundled simulation corridors, never recomputed.".into(),
            "Higher-order modes are outside the half-wave model; only the fundamental is reported.".into(),
            "The loading-length model is calibrated near the design point and underestimates measured boards by roughly 15 percent at the short-length end of the tuning range.".into(),
        ],
    })
}

/// One row of a width sweep at a fixed target frequency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthSweepRow {
    pub resonator_width: f64,
    /// Strip length solved so this width resonates at the template's
    /// frequency, m.
    pub length: f64,
    pub strip_impedance: f64,
    pub q_unloaded: f64,
    pub coupling: f64,
    /// Transmission linewidth over resonance frequency, (1 + 2 beta) / Q0.
    pub fractional_bandwidth: f64,
    /// Field gain over the bare feed line, Z_L / Z_R.
    pub efficiency_ratio: f64,
}

/// Evaluate the template across resonator widths, holding the resonance
/// frequency at the template's own. `q_values` is either one Q for all
/// widths or one per width.
pub fn sweep_width(
    template: &ResonatorGeometry,
    widths: &[f64],
    q_values: &[f64],
) -> Result<Vec<WidthSweepRow>> {
    if widths.is_empty() || q_values.is_empty() {
        return Err(Error::domain("width and Q lists must be non-empty"));
    }
    if q_values.len() != 1 && q_values.len() != widths.len() {
        return Err(Error::domain("need one Q value, or one per width"));
    }
    let target = txline::half_wave_frequency(&template.resonator_section()?, template.loading_length)?;
    let mut rows = Vec::with_capacity(widths.len());
    for (i, &w) in widths.iter().enumerate() {
        let q0 = q_values[if q_values.len() == 1 { 0 } else { i }];
        let z = txline::characteristic_impedance(&template.substrate, w)?;
        let length =
            txline::length_for_frequency(target, w, &template.substrate, template.loading_length)?;
        let beta = resnet::coupling_from_impedances(q0, z, NOMINAL_LINE_IMPEDANCE)?;
        rows.push(WidthSweepRow {
            resonator_width: w,
            length,
            strip_impedance: z,
            q_unloaded: q0,
            coupling: beta,
            fractional_bandwidth: (1.0 + 2.0 * beta) / q0,
            efficiency_ratio: efficiency_ratio(NOMINAL_LINE_IMPEDANCE, z)?,
        });
    }
    Ok(rows)
}

/// Field gain of the strongly overcoupled resonator over the bare line,
/// Z_L / Z_R. Same for both modes up to the reflection factor of two.
pub fn efficiency_ratio(z_line: f64, z_resonator: f64) -> Result<f64> {
    if !(z_line > 0.0 && z_resonator > 0.0) {
        return Err(Error::domain("impedances must be > 0"));
    }
    Ok(z_line / z_resonator)
}

/// Resonance frequencies reachable by varying the strip length between
/// `l_min` and `l_max` (inclusive), as (lowest, highest). Equal lengths
/// give a degenerate single-frequency range.
pub fn tuning_range(geometry: &ResonatorGeometry, l_min: f64, l_max: f64) -> Result<(f64, f64)> {
    if !(l_min > 0.0 && l_max >= l_min) {
        return Err(Error::domain("need 0 < l_min <= l_max"));
    }
    let at = |l: f64| -> Result<f64> {
        let section = MicrostripSection::new(geometry.resonator_width, l, geometry.substrate.clone())?;
        txline::half_wave_frequency(&section, geometry.loading_length)
    };
    Ok((at(l_max)?, at(l_min)?))
}

/// Factor by which the resonance frequency shifts when substrate `a` is
/// replaced by substrate `b` at the same geometry: sqrt of the effective
/// permittivity ratio at the resonator width.
pub fn substrate_scaling(
    geometry: &ResonatorGeometry,
    a: &SubstrateSpec,
    b: &SubstrateSpec,
) -> Result<f64> {
    let ea = txline::effective_permittivity(a, geometry.resonator_width)?;
    let eb = txline::effective_permittivity(b, geometry.resonator_width)?;
    Ok((eb / ea).sqrt())
}
