//! Power to magnetic-field conversion for wires, loops, and resonator-driven
//! omega loops, plus the on-axis decay model.
//!
//! The RF current on a matched line of impedance Z at power P is
//! I = sqrt(2 P / Z). A straight wire produces the tangential field
//! H = I/(2 pi r); an ideal loop of diameter D produces H = I/D in its
//! center. A real omega loop with finite conductor width falls short of the
//! ideal-loop bound because the current spreads away from the inner edge;
//! that shortfall is captured by a single derating factor (0.49 for the
//! reference geometry) or, more finely, by the bundled conductor-width table
//! in [`tables`].
//!
//! Mounting the loop at the current antinode of a resonator multiplies the
//! line current by the resonant enhancement R(nu0) sqrt(Q0) with the peak
//! field factor R from the resonator network model, referred to the
//! resonator impedance. In the strongly overcoupled limit those fitted
//! parameters drop out and only the impedance ratio remains, which is often
//! the more robust estimate.

use crate::error::{Error, Result};
use crate::lm::{least_squares, LmOptions};
use crate::resnet::{peak_field_factor, Mode, ResonatorParams};

/// How a conversion-efficiency number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Ideal closed-form bound with no derating applied.
    AnalyticBound,
    /// Closed form times an empirical derating factor.
    Derated,
    /// Read from a bundled reference table.
    External,
}

/// A field conversion efficiency in A/m per sqrt(W), tagged with how it was
/// obtained and, where meaningful, the frequency it applies at.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FieldEfficiency {
    pub value: f64,
    pub provenance: Provenance,
    pub frequency: Option<f64>,
}

/// Planar omega-loop geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSpec {
    /// Inner diameter of the loop opening, m.
    pub inner_diameter: f64,
    /// Conductor width of the loop trace, m.
    pub conductor_width: f64,
    /// Gap between the two loop terminals, m.
    pub gap: f64,
    /// Ratio of the real center field to the ideal-loop value, in (0, 1].
    pub derating: f64,
}

impl LoopSpec {
    pub fn new(inner_diameter: f64, conductor_width: f64, gap: f64, derating: f64) -> Result<Self> {
        if !(inner_diameter > 0.0 && conductor_width > 0.0 && gap > 0.0) {
            return Err(Error::domain("loop dimensions must be > 0"));
        }
        if !(derating > 0.0 && derating <= 1.0) {
            return Err(Error::domain("derating must be in (0, 1]"));
        }
        Ok(LoopSpec {
            inner_diameter,
            conductor_width,
            gap,
            derating,
        })
    }

    /// The reference loop: 0.4 mm inner diameter, 0.1 mm conductor, 0.1 mm
    /// gap. Its simulated center field is 0.49 of the ideal-loop bound.
    pub fn reference() -> Self {
        LoopSpec {
            inner_diameter: 0.4e-3,
            conductor_width: 0.1e-3,
            gap: 0.1e-3,
            derating: 0.49,
        }
    }
}

/// RF current amplitude I = sqrt(2 P / Z) on a matched line.
pub fn line_current(power: f64, impedance: f64) -> Result<f64> {
    if !(power >= 0.0) {
        return Err(Error::domain("power must be >= 0"));
    }
    if !(impedance > 0.0) {
        return Err(Error::domain("impedance must be > 0"));
    }
    Ok((2.0 * power / impedance).sqrt())
}

/// Tangential field H = I/(2 pi r) at distance r from a straight wire.
pub fn wire_field(power: f64, impedance: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain("distance from the wire must be > 0"));
    }
    Ok(line_current(power, impedance)? / (2.0 * std::f64::consts::PI * r))
}

/// Center field H = I/D of an ideal (filamentary) loop of diameter D.
pub fn ideal_loop_field(power: f64, impedance: f64, diameter: f64) -> Result<f64> {
    if !(diameter > 0.0) {
        return Err(Error::domain("loop diameter must be > 0"));
    }
    Ok(line_current(power, impedance)? / diameter)
}

/// Conversion efficiency of a loop terminating a matched line of the given
/// impedance: derating * (1/D) * sqrt(2/Z).
pub fn loop_efficiency(loop_spec: &LoopSpec, impedance: f64) -> Result<FieldEfficiency> {
    if !(impedance > 0.0) {
        return Err(Error::domain("impedance must be > 0"));
    }
    let value = loop_spec.derating / loop_spec.inner_diameter * (2.0 / impedance).sqrt();
    Ok(FieldEfficiency {
        value,
        provenance: provenance_for(loop_spec),
        frequency: None,
    })
}

/// Conversion efficiency of the loop mounted on a resonator, from the fitted
/// resonator parameters: derating * R(nu0) * sqrt(Q0) * (1/D) * sqrt(2/Z_R),
/// where R is the peak field factor of the operating mode and Z_R the
/// resonator strip impedance.
pub fn resonant_efficiency(
    params: &ResonatorParams,
    z_resonator: f64,
    loop_spec: &LoopSpec,
) -> Result<FieldEfficiency> {
    if !(z_resonator > 0.0) {
        return Err(Error::domain("resonator impedance must be > 0"));
    }
    let value = loop_spec.derating * peak_field_factor(params) * params.unloaded_q.sqrt()
        / loop_spec.inner_diameter
        * (2.0 / z_resonator).sqrt();
    Ok(FieldEfficiency {
        value,
        provenance: provenance_for(loop_spec),
        frequency: Some(params.resonance_frequency),
    })
}

/// Strong-overcoupling limit of [`resonant_efficiency`], which depends only
/// on the impedance ratio: derating * (Z_L/Z_R) * (1/D) * sqrt(2/Z_L) in
/// transmission, and exactly twice that in reflection (one port feeds the
/// full power into half the loading).
pub fn high_beta_efficiency(
    mode: Mode,
    z_line: f64,
    z_resonator: f64,
    loop_spec: &LoopSpec,
) -> Result<FieldEfficiency> {
    if !(z_line > 0.0) || !(z_resonator > 0.0) {
        return Err(Error::domain("impedances must be > 0"));
    }
    let base = loop_spec.derating * z_line / z_resonator / loop_spec.inner_diameter
        * (2.0 / z_line).sqrt();
    let value = match mode {
        Mode::Transmission => base,
        Mode::Reflection => 2.0 * base,
    };
    Ok(FieldEfficiency {
        value,
        provenance: provenance_for(loop_spec),
        frequency: None,
    })
}

fn provenance_for(loop_spec: &LoopSpec) -> Provenance {
    if loop_spec.derating == 1.0 {
        Provenance::AnalyticBound
    } else {
        Provenance::Derated
    }
}

/// On-axis field of a loop of effective diameter D at height z:
/// H(z) = h0 * D^3 / (4 z^2 + D^2)^(3/2). Normalized so H(0) = h0.
pub fn axial_decay(h0: f64, effective_diameter: f64, z: f64) -> Result<f64> {
    if !(effective_diameter > 0.0) {
        return Err(Error::domain("effective diameter must be > 0"));
    }
    let d = effective_diameter;
    Ok(h0 * d.powi(3) / (4.0 * z * z + d * d).powf(1.5))
}

/// Result of fitting the axial decay model to (z, H) samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterFit {
    /// Extrapolated field at z = 0, A/m.
    pub h0: f64,
    /// Effective loop diameter, m. Typically somewhat larger than the
    /// geometric inner diameter because of the finite conductor width.
    pub effective_diameter: f64,
    /// Root-mean-square residual of the fit, A/m.
    pub residual_rms: f64,
}

/// Least-squares fit of the [`axial_decay`] model to measured or simulated
/// on-axis samples `(z, H)`. Needs at least three samples covering at least
/// two distinct heights. Both parameters are fitted in log space, keeping
/// them positive without constraints.
pub fn fit_effective_diameter(samples: &[(f64, f64)]) -> Result<DiameterFit> {
    if samples.len() < 3 {
        return Err(Error::domain("diameter fit needs at least three samples"));
    }
    let mut distinct = samples.iter().map(|s| s.0).collect::<Vec<_>>();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::DegenerateFit(
            "all samples share one height; the decay model is unconstrained".into(),
        ));
    }
    let h_max = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    if !(h_max > 0.0) {
        return Err(Error::domain("samples must contain positive field values"));
    }
    let z_mean = samples.iter().map(|s| s.0.abs()).sum::<f64>() / samples.len() as f64;
    let d_guess = (2.0 * z_mean).max(1e-9);

    let residuals = |p: &[f64]| -> Vec<f64> {
        let h0 = p[0].exp();
        let d = p[1].exp();
        samples
            .iter()
            .map(|&(z, h)| h0 * d.powi(3) / (4.0 * z * z + d * d).powf(1.5) - h)
            .collect()
    };
    let out = least_squares(
        residuals,
        &[h_max.ln(), d_guess.ln()],
        &LmOptions {
            max_iterations: 200,
            tolerance: 1e-12,
        },
    )?;
    if !out.converged {
        return Err(Error::DegenerateFit(
            "axial decay fit did not converge".into(),
        ));
    }
    Ok(DiameterFit {
        h0: out.params[0].exp(),
        effective_diameter: out.params[1].exp(),
        residual_rms: (out.ssr / samples.len() as f64).sqrt(),
    })
}

/// Ohmic dissipation P = I^2 R / 2 of an RF current in the loop conductor.
pub fn loop_power_loss(current: f64, loop_resistance: f64) -> Result<f64> {
    if !(current >= 0.0) || !(loop_resistance >= 0.0) {
        return Err(Error::domain("current and resistance must be >= 0"));
    }
    Ok(current * current / 2.0 * loop_resistance)
}

pub mod tables {
    //! Bundled reference tables in a small versioned plain-text format.
    //!
    //! Format: lines are UTF-8; everything from '#' to end of line is a
    //! comment; the first data line must read `version 1`; every following
    //! line is one row of whitespace-separated columns. Set the environment
    //! variable named by [`DATA_DIR_ENV`] to a directory containing files of
    //! the same names to override the bundled tables.

    use super::{FieldEfficiency, Provenance};
    use crate::error::{Error, Result};
    use std::borrow::Cow;

    /// Environment variable that redirects table loading to a directory.
    pub const DATA_DIR_ENV: &str = "OMEGALOOP_DATA_DIR";

    const WC_EFFICIENCY: &str = include_str!("../data/wc_efficiency.tsv");
    const FIELD_CORRIDORS: &str = include_str!("../data/field_corridors.tsv");

    fn load(name: &str, bundled: &'static str) -> Result<Cow<'static, str>> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => {
                let path = std::path::Path::new(&dir).join(name);
                Ok(Cow::Owned(std::fs::read_to_string(path)?))
            }
            None => Ok(Cow::Borrowed(bundled)),
        }
    }

    /// Split a table into data rows, validating the version line.
    fn data_rows(text: &str) -> Result<Vec<(usize, Vec<String>)>> {
        let mut rows = Vec::new();
        let mut version_seen = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if !version_seen {
                let mut it = line.split_whitespace();
                match (it.next(), it.next()) {
                    (Some("version"), Some("1")) => {
                        version_seen = true;
                        continue;
                    }
                    (Some("version"), Some(v)) => {
                        return Err(Error::Unsupported(format!("data table version {v}")));
                    }
                    _ => return Err(Error::parse(idx + 1, "expected a version line")),
                }
            }
            rows.push((idx + 1, line.split_whitespace().map(str::to_owned).collect()));
        }
        if !version_seen {
            return Err(Error::Unsupported("data table has no version line".into()));
        }
        Ok(rows)
    }

    fn field(row: &[String], line: usize, col: usize) -> Result<f64> {
        row.get(col)
            .ok_or_else(|| Error::parse(line, format!("missing column {}", col + 1)))?
            .parse::<f64>()
            .map_err(|_| Error::parse(line, format!("column {} is not a number", col + 1)))
    }

    /// One row of the conductor-width efficiency table, in SI units.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct WcEfficiencyRow {
        pub conductor_width: f64,
        pub efficiency: f64,
    }

    /// The full conductor-width efficiency curve, widths ascending.
    pub fn wc_efficiency_table() -> Result<Vec<WcEfficiencyRow>> {
        let text = load("wc_efficiency.tsv", WC_EFFICIENCY)?;
        let mut out = Vec::new();
        for (line, row) in data_rows(&text)? {
            let width_mm = field(&row, line, 0)?;
            let eff = field(&row, line, 1)?;
            if !(width_mm > 0.0 && eff > 0.0) {
                return Err(Error::parse(line, "width and efficiency must be > 0"));
            }
            out.push(WcEfficiencyRow {
                conductor_width: width_mm * 1e-3,
                efficiency: eff,
            });
        }
        if out.len() < 2 {
            return Err(Error::Unsupported(
                "conductor-width table needs at least two rows".into(),
            ));
        }
        if !out.windows(2).all(|w| w[0].conductor_width < w[1].conductor_width) {
            return Err(Error::Unsupported(
                "conductor-width table must be strictly ascending".into(),
            ));
        }
        Ok(out)
    }

    /// Conversion efficiency of the reference loop family at the given
    /// conductor width (m), linearly interpolated from the bundled curve.
    /// Widths outside the tabulated range are an error rather than an
    /// extrapolation.
    pub fn wc_efficiency(conductor_width: f64) -> Result<FieldEfficiency> {
        let table = wc_efficiency_table()?;
        let lo = table.first().unwrap().conductor_width;
        let hi = table.last().unwrap().conductor_width;
        if !(conductor_width >= lo && conductor_width <= hi) {
            return Err(Error::domain(format!(
                "conductor width {:.3} mm outside the tabulated range {:.3}..{:.3} mm",
                conductor_width * 1e3,
                lo * 1e3,
                hi * 1e3
            )));
        }
        let value = table
            .windows(2)
            .find_map(|w| {
                let (a, b) = (w[0], w[1]);
                if conductor_width >= a.conductor_width && conductor_width <= b.conductor_width {
                    let t = (conductor_width - a.conductor_width)
                        / (b.conductor_width - a.conductor_width);
                    Some(a.efficiency + t * (b.efficiency - a.efficiency))
                } else {
                    None
                }
            })
            .expect("range checked above");
        Ok(FieldEfficiency {
            value,
            provenance: Provenance::External,
            frequency: None,
        })
    }

    /// Region of a field map a corridor row refers to.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Region {
        /// Full mapped area spanning the loop opening.
        Scan,
        /// Central region where emitters sit.
        Pillar,
    }

    /// Min/max field magnitude observed at one height above the loop.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct CorridorRow {
        /// Height above the loop plane, m.
        pub height: f64,
        pub region: Region,
        /// A/m at 1 W.
        pub min_field: f64,
        /// A/m at 1 W.
        pub max_field: f64,
    }

    /// All bundled field-corridor rows.
    pub fn field_corridors() -> Result<Vec<CorridorRow>> {
        let text = load("field_corridors.tsv", FIELD_CORRIDORS)?;
        let mut out = Vec::new();
        for (line, row) in data_rows(&text)? {
            let height_um = field(&row, line, 0)?;
            let region = match row.get(1).map(String::as_str) {
                Some("scan") => Region::Scan,
                Some("pillar") => Region::Pillar,
                _ => return Err(Error::parse(line, "region must be 'scan' or 'pillar'")),
            };
            let min_field = field(&row, line, 2)?;
            let max_field = field(&row, line, 3)?;
            if !(min_field > 0.0 && min_field <= max_field) {
                return Err(Error::parse(line, "corridor bounds must satisfy 0 < min <= max"));
            }
            out.push(CorridorRow {
                height: height_um * 1e-6,
                region,
                min_field,
                max_field,
            });
        }
        Ok(out)
    }

    /// The corridor row at the given height (m) and region, if tabulated.
    pub fn field_corridor(height: f64, region: Region) -> Result<Option<CorridorRow>> {
        Ok(field_corridors()?.into_iter().find(|row| {
            row.region == region && (row.height - height).abs() <= 1e-9_f64.max(1e-6 * height)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn line_current_anchors() {
        assert_relative_eq!(line_current(1.0, 50.0).unwrap(), 0.2, max_relative = 1e-15);
        assert_eq!(line_current(0.0, 50.0).unwrap(), 0.0);
        assert_relative_eq!(line_current(4.0, 50.0).unwrap(), 0.4, max_relative = 1e-15);
        assert!(line_current(-1.0, 50.0).is_err());
        assert!(line_current(1.0, 0.0).is_err());
    }

    #[test]
    fn wire_field_anchors() {
        let h10 = wire_field(1.0, 50.0, 10e-6).unwrap();
        assert_relative_eq!(h10, 3183.0988618379065, max_relative = 1e-12);
        let h40 = wire_field(1.0, 50.0, 40e-6).unwrap();
        assert_relative_eq!(h40, 795.7747154594766, max_relative = 1e-12);
        assert_relative_eq!(h10 / 4.0, h40, max_relative = 1e-12);
        let h_diag = wire_field(1.0, 50.0, 2f64.sqrt() * 10e-6).unwrap();
        assert_relative_eq!(h_diag, 2250.7907903927653, max_relative = 1e-12);
        assert!(wire_field(1.0, 50.0, 0.0).is_err());
    }

    #[test]
    fn ideal_loop_anchors() {
        assert_relative_eq!(
            ideal_loop_field(1.0, 50.0, 200e-6).unwrap(),
            1000.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            ideal_loop_field(1.0, 50.0, 400e-6).unwrap(),
            500.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            ideal_loop_field(0.25, 50.0, 400e-6).unwrap(),
            250.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn fields_scale_as_sqrt_power() {
        for p in [0.1, 0.68, 1.0, 3.7] {
            let scale = 2f64.sqrt();
            assert_relative_eq!(
                wire_field(2.0 * p, 50.0, 10e-6).unwrap(),
                scale * wire_field(p, 50.0, 10e-6).unwrap(),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                ideal_loop_field(2.0 * p, 50.0, 400e-6).unwrap(),
                scale * ideal_loop_field(p, 50.0, 400e-6).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn loop_efficiency_anchors() {
        let reference = loop_efficiency(&LoopSpec::reference(), 50.0).unwrap();
        assert_relative_eq!(reference.value, 245.0, max_relative = 1e-12);
        assert_eq!(reference.provenance, Provenance::Derated);

        let mut ideal = LoopSpec::reference();
        ideal.derating = 1.0;
        let bound = loop_efficiency(&ideal, 50.0).unwrap();
        assert_relative_eq!(bound.value, 500.0, max_relative = 1e-12);
        assert_eq!(bound.provenance, Provenance::AnalyticBound);
        assert!(bound.value >= reference.value);
    }

    #[test]
    fn resonant_efficiency_anchors() {
        let params = ResonatorParams::new(2.93e9, 74.0, 11.5, Mode::Transmission).unwrap();
        let eff = resonant_efficiency(&params, 10.4, &LoopSpec::reference()).unwrap();
        assert_relative_eq!(eff.value, 1305.9241429938697, max_relative = 1e-12);
        assert_eq!(eff.frequency, Some(2.93e9));

        let mut ideal = LoopSpec::reference();
        ideal.derating = 1.0;
        let matched = ResonatorParams::new(2.93e9, 100.0, 1.0, Mode::Reflection).unwrap();
        let eff = resonant_efficiency(&matched, 50.0, &ideal).unwrap();
        assert_relative_eq!(eff.value, 5000.0, max_relative = 1e-12);
    }

    #[test]
    fn high_beta_anchors_and_mode_ratio() {
        let loop_spec = LoopSpec::reference();
        let t = high_beta_efficiency(Mode::Transmission, 50.0, 10.4, &loop_spec).unwrap();
        assert_relative_eq!(t.value, 1177.8846153846152, max_relative = 1e-12);
        assert!((t.value - 1170.0).abs() / 1170.0 < 0.01);
        let r = high_beta_efficiency(Mode::Reflection, 50.0, 10.4, &loop_spec).unwrap();
        assert_relative_eq!(r.value, 2.0 * t.value, max_relative = 1e-15);
        assert!((r.value - 2230.0).abs() / 2230.0 < 0.06);
    }

    #[test]
    fn resonant_approaches_high_beta() {
        // with Q0 = beta Z_L / Z_R the exact form approaches the limit as
        // 1/(2 beta) in transmission and 1/beta in reflection
        let loop_spec = LoopSpec::reference();
        for beta in [10.5, 20.0, 50.0, 200.0] {
            let q0 = beta * 50.0 / 10.4;
            let pt = ResonatorParams::new(2.93e9, q0, beta, Mode::Transmission).unwrap();
            let exact = resonant_efficiency(&pt, 10.4, &loop_spec).unwrap().value;
            let limit = high_beta_efficiency(Mode::Transmission, 50.0, 10.4, &loop_spec)
                .unwrap()
                .value;
            assert!((exact - limit).abs() / limit < 1.0 / (2.0 * beta));

            let pr = ResonatorParams::new(2.93e9, q0, beta, Mode::Reflection).unwrap();
            let exact = resonant_efficiency(&pr, 10.4, &loop_spec).unwrap().value;
            let limit = high_beta_efficiency(Mode::Reflection, 50.0, 10.4, &loop_spec)
                .unwrap()
                .value;
            assert!((exact - limit).abs() / limit < 1.0 / beta);
        }
    }

    #[test]
    fn axial_decay_anchors() {
        assert_relative_eq!(axial_decay(777.0, 440e-6, 0.0).unwrap(), 777.0);
        assert_relative_eq!(
            axial_decay(1.0, 1.0, 0.5).unwrap(),
            0.35355339059327373,
            max_relative = 1e-12
        );
        let h100 = axial_decay(1190.0, 440e-6, 100e-6).unwrap();
        assert_relative_eq!(h100, 897.833349930414, max_relative = 1e-12);
        let h10 = axial_decay(1190.0, 440e-6, 10e-6).unwrap();
        assert_relative_eq!(h10, 1186.3214854010805, max_relative = 1e-12);
    }

    #[test]
    fn axial_decay_sits_inside_measured_corridors() {
        // the fitted on-axis model should agree with the mapped pillar-area
        // corridor at both tabulated heights
        let rows = tables::field_corridors().unwrap();
        for (z, expected_region) in [(10e-6, tables::Region::Pillar), (100e-6, tables::Region::Pillar)] {
            let row = rows
                .iter()
                .find(|r| r.region == expected_region && (r.height - z).abs() < 1e-9)
                .unwrap();
            let h = axial_decay(1190.0, 440e-6, z).unwrap();
            assert!(
                h > row.min_field && h < row.max_field,
                "H({z}) = {h} outside {}..{}",
                row.min_field,
                row.max_field
            );
        }
    }

    #[test]
    fn axial_decay_far_field_slope() {
        // log-log slope at z = 100 D should be -3 within 1 percent
        let d = 440e-6;
        let z = 100.0 * d;
        let dz = 1e-4 * z;
        let h_plus = axial_decay(1.0, d, z + dz).unwrap();
        let h_minus = axial_decay(1.0, d, z - dz).unwrap();
        let slope = (h_plus.ln() - h_minus.ln()) / ((z + dz).ln() - (z - dz).ln());
        assert!((slope - (-3.0)).abs() < 0.01, "slope = {slope}");
        assert!((slope - (-2.9999250018749533)).abs() < 1e-6);
    }

    #[test]
    fn diameter_fit_round_trip() {
        let truth_h0 = 1190.0;
        let truth_d = 440e-6;
        let samples: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let z = 5e-6 * i as f64;
                (z, axial_decay(truth_h0, truth_d, z).unwrap())
            })
            .collect();
        let fit = fit_effective_diameter(&samples).unwrap();
        assert_relative_eq!(fit.h0, truth_h0, max_relative = 1e-6);
        assert_relative_eq!(fit.effective_diameter, truth_d, max_relative = 1e-6);
        assert!((fit.effective_diameter - truth_d).abs() / truth_d < 1e-3);
        assert!(fit.residual_rms < 1e-6);

        // multiplicative rescaling moves h0 only
        let scaled: Vec<(f64, f64)> = samples.iter().map(|&(z, h)| (z, 3.0 * h)).collect();
        let fit3 = fit_effective_diameter(&scaled).unwrap();
        assert_relative_eq!(fit3.h0, 3.0 * truth_h0, max_relative = 1e-6);
        assert_relative_eq!(fit3.effective_diameter, truth_d, max_relative = 1e-4);
    }

    #[test]
    fn diameter_fit_tolerates_noise() {
        // 1 percent multiplicative noise from a tiny deterministic LCG
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut unit = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let samples: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let z = 4e-6 * i as f64;
                let h = axial_decay(1190.0, 440e-6, z).unwrap();
                (z, h * (1.0 + 0.01 * (2.0 * unit() - 1.0)))
            })
            .collect();
        let fit = fit_effective_diameter(&samples).unwrap();
        assert!((fit.effective_diameter - 440e-6).abs() / 440e-6 < 0.03);
    }

    #[test]
    fn diameter_fit_rejects_degenerate_input() {
        assert!(fit_effective_diameter(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
        let same_z = [(1e-5, 100.0), (1e-5, 101.0), (1e-5, 99.0)];
        assert!(matches!(
            fit_effective_diameter(&same_z),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn loop_loss_anchors() {
        assert_relative_eq!(loop_power_loss(0.2, 1.0).unwrap(), 0.02, max_relative = 1e-12);
        assert_eq!(loop_power_loss(0.0, 5.0).unwrap(), 0.0);
        assert_relative_eq!(
            loop_power_loss(0.4, 1.0).unwrap(),
            4.0 * loop_power_loss(0.2, 1.0).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn loop_spec_validation() {
        assert!(LoopSpec::new(0.0, 1e-4, 1e-4, 0.5).is_err());
        assert!(LoopSpec::new(4e-4, 1e-4, 1e-4, 0.0).is_err());
        assert!(LoopSpec::new(4e-4, 1e-4, 1e-4, 1.1).is_err());
        assert!(LoopSpec::new(4e-4, 1e-4, 1e-4, 1.0).is_ok());
    }

    #[test]
    fn wc_table_interpolation() {
        let at_design = tables::wc_efficiency(0.1e-3).unwrap();
        assert_relative_eq!(at_design.value, 245.0, max_relative = 1e-12);
        assert_eq!(at_design.provenance, Provenance::External);

        // interpolation lands between neighbors and the curve decreases
        let mid = tables::wc_efficiency(0.125e-3).unwrap().value;
        assert!(mid < 245.0 && mid > 221.12);
        let table = tables::wc_efficiency_table().unwrap();
        assert!(table.windows(2).all(|w| w[1].efficiency < w[0].efficiency));

        assert!(tables::wc_efficiency(1e-5).is_err());
        assert!(tables::wc_efficiency(1e-3).is_err());
    }

    #[test]
    fn corridor_lookup() {
        let rows = tables::field_corridors().unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.min_field <= r.max_field));
        let pillar = tables::field_corridor(100e-6, tables::Region::Pillar)
            .unwrap()
            .unwrap();
        assert_eq!(pillar.min_field, 832.0);
        assert_eq!(pillar.max_field, 908.0);
        assert!(tables::field_corridor(55e-6, tables::Region::Scan)
            .unwrap()
            .is_none());
    }
}
