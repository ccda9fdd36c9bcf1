//! Touchstone (version 1.0) and CSV trace I/O.
//!
//! Touchstone files carry an option line
//!
//!   # <frequency unit> S <format> R <reference impedance>
//!
//! with defaults `# GHZ S MA R 50` when fields (or the whole line) are
//! omitted, "!" comments, and one data row per frequency: 3 columns for a
//! one-port (f, S11), 9 columns for a two-port (f, S11, S21, S12, S22).
//! Values come in dB-angle, magnitude-angle, or real-imaginary pairs;
//! angles are degrees. Version 2.0 keyword lines (starting with '[') are
//! rejected outright. All output is ASCII; numbers are written with 13
//! significant digits so a write/parse round trip preserves values to well
//! below 1e-9 relative.
//!
//! The CSV sidecar format covers magnitude-only data such as digitized
//! plots: a mandatory header `frequency_hz,s11_db` (optionally `,s21_db`)
//! and one row per point. Phase is absent, so parsed CSV traces carry zero
//! phase and are only meaningful for magnitude-objective fitting.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One- or two-port S-parameter trace on a strictly increasing frequency
/// grid (Hz).
#[derive(Debug, Clone, PartialEq)]
pub struct SParamTrace {
    pub frequencies: Vec<f64>,
    pub s11: Vec<Complex64>,
    pub two_port: Option<TwoPortData>,
    pub reference_impedance: f64,
}

/// The remaining entries of a two-port trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortData {
    pub s21: Vec<Complex64>,
    pub s12: Vec<Complex64>,
    pub s22: Vec<Complex64>,
}

impl SParamTrace {
    pub fn one_port(
        frequencies: Vec<f64>,
        s11: Vec<Complex64>,
        reference_impedance: f64,
    ) -> Result<Self> {
        validate_grid(&frequencies, reference_impedance)?;
        if frequencies.len() != s11.len() {
            return Err(Error::domain("frequency and S11 lengths differ"));
        }
        Ok(SParamTrace {
            frequencies,
            s11,
            two_port: None,
            reference_impedance,
        })
    }

    pub fn two_port(
        frequencies: Vec<f64>,
        s11: Vec<Complex64>,
        s21: Vec<Complex64>,
        s12: Vec<Complex64>,
        s22: Vec<Complex64>,
        reference_impedance: f64,
    ) -> Result<Self> {
        validate_grid(&frequencies, reference_impedance)?;
        let n = frequencies.len();
        if s11.len() != n || s21.len() != n || s12.len() != n || s22.len() != n {
            return Err(Error::domain("frequency and S-parameter lengths differ"));
        }
        Ok(SParamTrace {
            frequencies,
            s11,
            two_port: Some(TwoPortData { s21, s12, s22 }),
            reference_impedance,
        })
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn ports(&self) -> usize {
        if self.two_port.is_some() {
            2
        } else {
            1
        }
    }
}

fn validate_grid(frequencies: &[f64], reference_impedance: f64) -> Result<()> {
    if !(reference_impedance > 0.0) {
        return Err(Error::domain("reference impedance must be > 0"));
    }
    if !frequencies.iter().all(|f| f.is_finite() && *f > 0.0) {
        return Err(Error::domain("frequencies must be finite and > 0"));
    }
    if !frequencies.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::domain("frequencies must be strictly increasing"));
    }
    Ok(())
}

/// Number representation used in a Touchstone file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberFormat {
    /// 20 log10 magnitude, angle in degrees.
    Db,
    /// Linear magnitude, angle in degrees.
    #[default]
    MagnitudeAngle,
    /// Real and imaginary parts.
    RealImaginary,
}

/// Frequency unit of a Touchstone file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyUnit {
    Hz,
    KiloHz,
    MegaHz,
    #[default]
    GigaHz,
}

impl FrequencyUnit {
    pub fn factor(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KiloHz => 1e3,
            FrequencyUnit::MegaHz => 1e6,
            FrequencyUnit::GigaHz => 1e9,
        }
    }

    fn token(self) -> &'static str {
        match self {
            FrequencyUnit::Hz => "HZ",
            FrequencyUnit::KiloHz => "KHZ",
            FrequencyUnit::MegaHz => "MHZ",
            FrequencyUnit::GigaHz => "GHZ",
        }
    }
}

/// The option-line settings of a Touchstone file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TouchstoneOptions {
    pub unit: FrequencyUnit,
    pub format: NumberFormat,
    pub reference_impedance: f64,
}

impl Default for TouchstoneOptions {
    fn default() -> Self {
        TouchstoneOptions {
            unit: FrequencyUnit::default(),
            format: NumberFormat::default(),
            reference_impedance: 50.0,
        }
    }
}

/// 20 log10 |s|; exactly zero magnitude maps to negative infinity.
pub fn db_magnitude(s: Complex64) -> f64 {
    let norm = s.norm();
    if norm == 0.0 {
        f64::NEG_INFINITY
    } else {
        20.0 * norm.log10()
    }
}

/// Parse a version-1.0 Touchstone file. Frequencies must be strictly
/// increasing; see [`parse_touchstone_tolerant`] for data that needs
/// sorting first.
pub fn parse_touchstone(text: &str) -> Result<(SParamTrace, TouchstoneOptions)> {
    parse_touchstone_impl(text, false)
}

/// Like [`parse_touchstone`], but rows in non-increasing frequency order
/// are sorted instead of rejected. Duplicate frequencies remain an error.
pub fn parse_touchstone_tolerant(text: &str) -> Result<(SParamTrace, TouchstoneOptions)> {
    parse_touchstone_impl(text, true)
}

fn parse_touchstone_impl(text: &str, sort: bool) -> Result<(SParamTrace, TouchstoneOptions)> {
    let mut options = TouchstoneOptions::default();
    let mut option_line_seen = false;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut columns = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('!').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            return Err(Error::Unsupported(format!(
                "line {line_no}: Touchstone 2.0 keyword {}; only version 1.0 is supported",
                line.split_whitespace().next().unwrap_or("[")
            )));
        }
        if let Some(rest) = line.strip_prefix('#') {
            if option_line_seen {
                return Err(Error::parse(line_no, "duplicate option line"));
            }
            if !rows.is_empty() {
                return Err(Error::parse(line_no, "option line after data"));
            }
            options = parse_option_line(rest, line_no)?;
            option_line_seen = true;
            continue;
        }
        if line.contains(',') {
            return Err(Error::parse(
                line_no,
                "',' is not a valid separator; use '.' decimals and whitespace columns",
            ));
        }
        let mut values = Vec::new();
        for token in line.split_whitespace() {
            values.push(token.parse::<f64>().map_err(|_| {
                Error::parse(line_no, format!("'{token}' is not a number"))
            })?);
        }
        if rows.is_empty() {
            columns = values.len();
            if columns != 3 && columns != 9 {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "expected 3 (one-port) or 9 (two-port) columns, found {columns}"
                    ),
                ));
            }
        } else if values.len() != columns {
            return Err(Error::parse(
                line_no,
                format!("expected {columns} columns, found {}", values.len()),
            ));
        }
        rows.push((line_no, values));
    }

    if sort {
        rows.sort_by(|a, b| a.1[0].partial_cmp(&b.1[0]).unwrap_or(std::cmp::Ordering::Equal));
    }

    let mut frequencies = Vec::with_capacity(rows.len());
    let mut s11 = Vec::with_capacity(rows.len());
    let mut s21 = Vec::new();
    let mut s12 = Vec::new();
    let mut s22 = Vec::new();
    for (line_no, values) in &rows {
        let f = values[0] * options.unit.factor();
        if let Some(&last) = frequencies.last() {
            if f <= last {
                return Err(Error::parse(
                    *line_no,
                    if sort {
                        "duplicate frequency"
                    } else {
                        "frequencies must be strictly increasing"
                    },
                ));
            }
        }
        frequencies.push(f);
        s11.push(decode(values[1], values[2], options.format));
        if values.len() == 9 {
            s21.push(decode(values[3], values[4], options.format));
            s12.push(decode(values[5], values[6], options.format));
            s22.push(decode(values[7], values[8], options.format));
        }
    }

    let trace = if columns == 9 {
        SParamTrace::two_port(frequencies, s11, s21, s12, s22, options.reference_impedance)?
    } else {
        SParamTrace::one_port(frequencies, s11, options.reference_impedance)?
    };
    Ok((trace, options))
}

fn parse_option_line(rest: &str, line_no: usize) -> Result<TouchstoneOptions> {
    let mut options = TouchstoneOptions::default();
    let mut tokens = rest.split_whitespace().peekable();
    while let Some(token) = tokens.next() {
        match token.to_ascii_uppercase().as_str() {
            "HZ" => options.unit = FrequencyUnit::Hz,
            "KHZ" => options.unit = FrequencyUnit::KiloHz,
            "MHZ" => options.unit = FrequencyUnit::MegaHz,
            "GHZ" => options.unit = FrequencyUnit::GigaHz,
            "S" => {}
            "Y" | "Z" | "H" | "G" => {
                return Err(Error::Unsupported(format!(
                    "line {line_no}: parameter type '{token}'; only S-parameters are supported"
                )));
            }
            "DB" => options.format = NumberFormat::Db,
            "MA" => options.format = NumberFormat::MagnitudeAngle,
            "RI" => options.format = NumberFormat::RealImaginary,
            "R" => {
                let value = tokens.next().ok_or_else(|| {
                    Error::parse(line_no, "option 'R' needs an impedance value")
                })?;
                let z = value.parse::<f64>().map_err(|_| {
                    Error::parse(line_no, format!("'{value}' is not an impedance"))
                })?;
                if !(z > 0.0) {
                    return Err(Error::parse(line_no, "reference impedance must be > 0"));
                }
                options.reference_impedance = z;
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unrecognized option token '{other}'"),
                ));
            }
        }
    }
    Ok(options)
}

fn decode(a: f64, b: f64, format: NumberFormat) -> Complex64 {
    match format {
        NumberFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        NumberFormat::MagnitudeAngle => Complex64::from_polar(a, b.to_radians()),
        NumberFormat::RealImaginary => Complex64::new(a, b),
    }
}

fn encode(s: Complex64, format: NumberFormat) -> (f64, f64) {
    match format {
        NumberFormat::Db => {
            // a true zero has no dB representation; write a floor far below
            // any physical dynamic range instead
            let db = db_magnitude(s).max(-600.0);
            (db, s.arg().to_degrees())
        }
        NumberFormat::MagnitudeAngle => (s.norm(), s.arg().to_degrees()),
        NumberFormat::RealImaginary => (s.re, s.im),
    }
}

/// Render a trace as a version-1.0 Touchstone file in the requested number
/// format and frequency unit. Output is deterministic: no comments, one
/// option line, 13 significant digits.
pub fn write_touchstone(trace: &SParamTrace, format: NumberFormat, unit: FrequencyUnit) -> String {
    let format_token = match format {
        NumberFormat::Db => "DB",
        NumberFormat::MagnitudeAngle => "MA",
        NumberFormat::RealImaginary => "RI",
    };
    let mut out = format!(
        "# {} S {} R {}\n",
        unit.token(),
        format_token,
        trace.reference_impedance
    );
    for i in 0..trace.len() {
        let f = trace.frequencies[i] / unit.factor();
        let mut row = format!("{f:.12e}");
        let mut push = |s: Complex64| {
            let (a, b) = encode(s, format);
            row.push_str(&format!(" {a:.12e} {b:.12e}"));
        };
        push(trace.s11[i]);
        if let Some(tp) = &trace.two_port {
            push(tp.s21[i]);
            push(tp.s12[i]);
            push(tp.s22[i]);
        }
        row.push('\n');
        out.push_str(&row);
    }
    out
}

/// Parse the CSV sidecar format: header `frequency_hz,s11_db[,s21_db]`,
/// one row per point. Magnitudes only; the returned trace has zero phase
/// everywhere, and a two-column file is completed symmetrically
/// (S12 = S21, S22 = S11), which is exact for the symmetric resonator
/// model this crate fits.
pub fn read_csv_trace(text: &str) -> Result<SParamTrace> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty file; expected a header row"))?;
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    let with_s21 = match fields.as_slice() {
        ["frequency_hz", "s11_db"] => false,
        ["frequency_hz", "s11_db", "s21_db"] => true,
        _ => {
            return Err(Error::parse(
                1,
                "header must be 'frequency_hz,s11_db' or 'frequency_hz,s11_db,s21_db'",
            ));
        }
    };
    let mut frequencies = Vec::new();
    let mut s11 = Vec::new();
    let mut s21 = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let expected = if with_s21 { 3 } else { 2 };
        if cols.len() != expected {
            return Err(Error::parse(
                line_no,
                format!("expected {expected} columns, found {}", cols.len()),
            ));
        }
        let parse = |tok: &str| -> Result<f64> {
            tok.parse::<f64>()
                .map_err(|_| Error::parse(line_no, format!("'{tok}' is not a number")))
        };
        frequencies.push(parse(cols[0])?);
        s11.push(Complex64::new(10f64.powf(parse(cols[1])? / 20.0), 0.0));
        if with_s21 {
            s21.push(Complex64::new(10f64.powf(parse(cols[2])? / 20.0), 0.0));
        }
    }
    if with_s21 {
        let s12 = s21.clone();
        let s22 = s11.clone();
        SParamTrace::two_port(frequencies, s11, s21, s12, s22, 50.0)
    } else {
        SParamTrace::one_port(frequencies, s11, 50.0)
    }
}

/// Render a trace in the CSV sidecar format (magnitudes in dB; phase is
/// discarded).
pub fn write_csv_trace(trace: &SParamTrace) -> String {
    let mut out = String::new();
    match &trace.two_port {
        Some(tp) => {
            out.push_str("frequency_hz,s11_db,s21_db\n");
            for i in 0..trace.len() {
                out.push_str(&format!(
                    "{:.12e},{:.12e},{:.12e}\n",
                    trace.frequencies[i],
                    db_magnitude(trace.s11[i]).max(-600.0),
                    db_magnitude(tp.s21[i]).max(-600.0)
                ));
            }
        }
        None => {
            out.push_str("frequency_hz,s11_db\n");
            for i in 0..trace.len() {
                out.push_str(&format!(
                    "{:.12e},{:.12e}\n",
                    trace.frequencies[i],
                    db_magnitude(trace.s11[i]).max(-600.0)
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn db_magnitude_anchors() {
        assert_eq!(db_magnitude(Complex64::new(1.0, 0.0)), 0.0);
        assert_relative_eq!(
            db_magnitude(Complex64::new(0.1, 0.0)),
            -20.0,
            max_relative = 1e-12
        );
        assert!((db_magnitude(Complex64::new(0.0417, 0.0)) - (-27.6)).abs() < 0.01);
        assert_eq!(db_magnitude(Complex64::new(0.0, 0.0)), f64::NEG_INFINITY);
    }

    #[test]
    fn parses_db_two_port_row() {
        let text = "! fixture capture\n# GHz S DB R 50\n2.9 -27.6 0 -0.37 180 -0.37 180 -27.6 0\n";
        let (trace, options) = parse_touchstone(text).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.ports(), 2);
        assert_eq!(options.format, NumberFormat::Db);
        assert_relative_eq!(trace.frequencies[0], 2.9e9, max_relative = 1e-12);
        let s11 = trace.s11[0];
        assert!((s11.norm() - 0.0417).abs() < 1e-4);
        let s21 = trace.two_port.as_ref().unwrap().s21[0];
        assert!(s21.re < 0.0, "180 degree phase");
        assert!((s21.norm() - 10f64.powf(-0.37 / 20.0)).abs() < 1e-12);
    }

    #[test]
    fn defaults_when_option_line_missing() {
        let (trace, options) = parse_touchstone("2.93 0.5 10\n3.0 0.6 -10\n").unwrap();
        assert_eq!(options.unit, FrequencyUnit::GigaHz);
        assert_eq!(options.format, NumberFormat::MagnitudeAngle);
        assert_eq!(options.reference_impedance, 50.0);
        assert_relative_eq!(trace.frequencies[0], 2.93e9, max_relative = 1e-12);
        assert_relative_eq!(trace.s11[0].norm(), 0.5, max_relative = 1e-12);
        assert_eq!(trace.ports(), 1);
    }

    #[test]
    fn empty_data_is_a_valid_empty_trace() {
        let (trace, _) = parse_touchstone("# MHz S RI R 75\n! nothing yet\n").unwrap();
        assert!(trace.is_empty());
        assert_eq!(trace.reference_impedance, 75.0);
    }

    #[test]
    fn rejects_v2_and_non_s_parameters() {
        assert!(matches!(
            parse_touchstone("[Version] 2.0\n# Hz S MA R 50\n"),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            parse_touchstone("# Hz Y MA R 50\n1 0.5 0\n"),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            parse_touchstone("# Hz S MA R 50\n1 0.5\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_touchstone("# Hz S MA R 50\n1 0,5 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_touchstone("# Hz S MA R 50\n1 half 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_touchstone("# Hz S MA R 50\n2 0.5 0\n1 0.5 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_touchstone("# Hz S MA R 50\n# Hz S MA R 50\n"),
            Err(Error::Parse { .. })
        ));
        // bad option token
        assert!(matches!(
            parse_touchstone("# Hz S MA Q 50\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn tolerant_parse_sorts_rows() {
        let text = "# Hz S MA R 50\n3 0.3 0\n1 0.1 0\n2 0.2 0\n";
        assert!(parse_touchstone(text).is_err());
        let (trace, _) = parse_touchstone_tolerant(text).unwrap();
        assert_eq!(trace.frequencies, vec![1.0, 2.0, 3.0]);
        assert_relative_eq!(trace.s11[0].norm(), 0.1, max_relative = 1e-12);
        // duplicates stay fatal
        assert!(parse_touchstone_tolerant("# Hz S MA R 50\n1 0.1 0\n1 0.2 0\n").is_err());
    }

    fn sample_trace() -> SParamTrace {
        let frequencies: Vec<f64> = (0..201).map(|i| 1e9 + 2e7 * i as f64).collect();
        let s11: Vec<Complex64> = frequencies
            .iter()
            .map(|f| Complex64::from_polar(0.3 + 1e-11 * f.sqrt(), (f / 1e9).sin()))
            .collect();
        let s21: Vec<Complex64> = frequencies
            .iter()
            .map(|f| Complex64::from_polar(0.9 - 1e-11 * f.sqrt(), (f / 2e9).cos()))
            .collect();
        let s12 = s21.clone();
        let s22 = s11.clone();
        SParamTrace::two_port(frequencies, s11, s21, s12, s22, 50.0).unwrap()
    }

    #[test]
    fn touchstone_round_trip_all_formats_and_units() {
        let trace = sample_trace();
        for format in [
            NumberFormat::Db,
            NumberFormat::MagnitudeAngle,
            NumberFormat::RealImaginary,
        ] {
            for unit in [
                FrequencyUnit::Hz,
                FrequencyUnit::KiloHz,
                FrequencyUnit::MegaHz,
                FrequencyUnit::GigaHz,
            ] {
                let text = write_touchstone(&trace, format, unit);
                let (back, options) = parse_touchstone(&text).unwrap();
                assert_eq!(options.format, format);
                assert_eq!(options.unit, unit);
                assert_eq!(back.len(), trace.len());
                for i in 0..trace.len() {
                    assert_relative_eq!(
                        back.frequencies[i],
                        trace.frequencies[i],
                        max_relative = 1e-9
                    );
                    let orig = trace.s11[i];
                    let got = back.s11[i];
                    assert!(
                        (got - orig).norm() <= 1e-9 * orig.norm().max(1.0),
                        "format {format:?} unit {unit:?} point {i}: {got} vs {orig}"
                    );
                    let orig = trace.two_port.as_ref().unwrap().s21[i];
                    let got = back.two_port.as_ref().unwrap().s21[i];
                    assert!((got - orig).norm() <= 1e-9 * orig.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn unit_scaling_is_consistent() {
        let trace = sample_trace();
        let mhz = write_touchstone(&trace, NumberFormat::RealImaginary, FrequencyUnit::MegaHz);
        let ghz = write_touchstone(&trace, NumberFormat::RealImaginary, FrequencyUnit::GigaHz);
        let (t_mhz, _) = parse_touchstone(&mhz).unwrap();
        let (t_ghz, _) = parse_touchstone(&ghz).unwrap();
        for i in 0..trace.len() {
            assert_relative_eq!(
                t_mhz.frequencies[i],
                t_ghz.frequencies[i],
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn one_port_writes_three_columns() {
        let trace = SParamTrace::one_port(
            vec![1e9, 2e9],
            vec![Complex64::new(-0.0417, 0.0), Complex64::new(0.5, 0.5)],
            50.0,
        )
        .unwrap();
        let text = write_touchstone(&trace, NumberFormat::RealImaginary, FrequencyUnit::GigaHz);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# GHZ S RI R 50");
        let row = lines.next().unwrap();
        assert_eq!(row.split_whitespace().count(), 3);
        assert!(row.split_whitespace().nth(1).unwrap().starts_with("-4.17"));
    }

    #[test]
    fn zero_magnitude_survives_db_round_trip() {
        let trace = SParamTrace::one_port(
            vec![1e9],
            vec![Complex64::new(0.0, 0.0)],
            50.0,
        )
        .unwrap();
        let text = write_touchstone(&trace, NumberFormat::Db, FrequencyUnit::GigaHz);
        let (back, _) = parse_touchstone(&text).unwrap();
        assert!(back.s11[0].norm() < 1e-29);
    }

    #[test]
    fn trace_validation() {
        let c = Complex64::new(0.1, 0.0);
        assert!(SParamTrace::one_port(vec![1e9, 1e9], vec![c, c], 50.0).is_err());
        assert!(SParamTrace::one_port(vec![2e9, 1e9], vec![c, c], 50.0).is_err());
        assert!(SParamTrace::one_port(vec![1e9], vec![c, c], 50.0).is_err());
        assert!(SParamTrace::one_port(vec![1e9], vec![c], 0.0).is_err());
        assert!(SParamTrace::two_port(vec![1e9], vec![c], vec![c], vec![c], vec![], 50.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let trace = sample_trace();
        let text = write_csv_trace(&trace);
        assert!(text.starts_with("frequency_hz,s11_db,s21_db\n"));
        let back = read_csv_trace(&text).unwrap();
        assert_eq!(back.len(), trace.len());
        for i in 0..trace.len() {
            // CSV keeps magnitudes only
            assert_relative_eq!(
                back.s11[i].norm(),
                trace.s11[i].norm(),
                max_relative = 1e-9
            );
            assert_abs_diff_eq!(back.s11[i].im, 0.0);
            assert_relative_eq!(
                back.two_port.as_ref().unwrap().s21[i].norm(),
                trace.two_port.as_ref().unwrap().s21[i].norm(),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn csv_rejects_bad_headers_and_rows() {
        assert!(matches!(
            read_csv_trace("freq,s11\n1,2\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_csv_trace("frequency_hz,s11_db\n1e9\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_csv_trace("frequency_hz,s11_db\n1e9,abc\n"),
            Err(Error::Parse { .. })
        ));
        let one_port = read_csv_trace("frequency_hz,s11_db\n1e9,-27.6\n2e9,-3\n").unwrap();
        assert_eq!(one_port.ports(), 1);
        assert!((one_port.s11[0].norm() - 0.0417).abs() < 1e-4);
    }
}
