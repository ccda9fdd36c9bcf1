//! Suffixed-quantity parsing for command-line options.
//!
//! Values accept an optional unit suffix, case-insensitive, with or
//! without a space: `2.93GHz`, `50 ns`, `0.68W`, `400um`, `8.5mT`.
//! A bare number means the SI base unit of the quantity, except angles,
//! which default to degrees because that is how apertures are quoted.

fn parse_with_suffixes(s: &str, suffixes: &[(&str, f64)], what: &str) -> Result<f64, String> {
    let trimmed = s.trim();
    let lower = trimmed.to_lowercase();
    for (suffix, factor) in suffixes {
        if let Some(prefix) = lower.strip_suffix(suffix) {
            let value: f64 = prefix
                .trim()
                .parse()
                .map_err(|_| format!("'{trimmed}' is not a valid {what}"))?;
            return Ok(value * factor);
        }
    }
    lower
        .parse::<f64>()
        .map_err(|_| format!("'{trimmed}' is not a valid {what}"))
}

pub fn parse_frequency(s: &str) -> Result<f64, String> {
    parse_with_suffixes(
        s,
        &[("ghz", 1e9), ("mhz", 1e6), ("khz", 1e3), ("hz", 1.0)],
        "frequency",
    )
}

pub fn parse_duration(s: &str) -> Result<f64, String> {
    parse_with_suffixes(
        s,
        &[
            ("ns", 1e-9),
            ("us", 1e-6),
            ("\u{b5}s", 1e-6),
            ("ms", 1e-3),
            ("s", 1.0),
        ],
        "duration",
    )
}

pub fn parse_power(s: &str) -> Result<f64, String> {
    parse_with_suffixes(
        s,
        &[("uw", 1e-6), ("\u{b5}w", 1e-6), ("mw", 1e-3), ("w", 1.0)],
        "power",
    )
}

pub fn parse_length(s: &str) -> Result<f64, String> {
    parse_with_suffixes(
        s,
        &[
            ("nm", 1e-9),
            ("um", 1e-6),
            ("\u{b5}m", 1e-6),
            ("mm", 1e-3),
            ("cm", 1e-2),
            ("m", 1.0),
        ],
        "length",
    )
}

pub fn parse_magnetic_field(s: &str) -> Result<f64, String> {
    parse_with_suffixes(
        s,
        &[("ut", 1e-6), ("\u{b5}t", 1e-6), ("mt", 1e-3), ("t", 1.0)],
        "magnetic field",
    )
}

/// Angles return radians; a bare number is taken as degrees.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let trimmed = s.trim();
    let lower = trimmed.to_lowercase();
    if let Some(prefix) = lower.strip_suffix("deg") {
        return prefix
            .trim()
            .parse::<f64>()
            .map(f64::to_radians)
            .map_err(|_| format!("'{trimmed}' is not a valid angle"));
    }
    if let Some(prefix) = lower.strip_suffix("rad") {
        return prefix
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("'{trimmed}' is not a valid angle"));
    }
    lower
        .parse::<f64>()
        .map(f64::to_radians)
        .map_err(|_| format!("'{trimmed}' is not a valid angle"))
}
