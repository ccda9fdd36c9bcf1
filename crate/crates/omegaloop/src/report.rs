//! Report rendering: diffable JSON and a terminal table.

use serde::Serialize;

use crate::designer::{DesignColumn, DesignReport};
use crate::error::{Error, Result};

/// Serialize to pretty JSON with alphabetically ordered keys. Going
/// through `serde_json::Value` first puts every map into sorted order, so
/// two runs with the same inputs produce byte-identical output.
pub fn to_sorted_json(value: &impl Serialize) -> Result<String> {
    let value = serde_json::to_value(value)
        .map_err(|e| Error::domain(format!("report serialization: {e}")))?;
    serde_json::to_string_pretty(&value)
        .map_err(|e| Error::domain(format!("report serialization: {e}")))
}

fn row(out: &mut String, label: &str, line: &str, tx: &str, rx: &str) {
    out.push_str(&format!("{label:<34}{line:>12}{tx:>14}{rx:>12}\n"));
}

/// Render the datasheet-style table: one column for the bare line and one
/// per coupling mode, using the supplied-impedance column when the report
/// has one (it tracks hardware better than the width formula).
pub fn render_text(report: &DesignReport) -> String {
    let col: &DesignColumn = report
        .by_supplied_impedance
        .as_ref()
        .unwrap_or(&report.by_strip_impedance);
    let mut out = String::new();
    out.push_str(&format!(
        "resonance {:.3} GHz, Q0 {:.0}, beta {:.2}, Z_R {:.2} ohm ({})\n\n",
        report.resonance_frequency.value / 1e9,
        report.q_unloaded.value,
        col.coupling.value,
        col.z_resonator.value,
        if report.by_supplied_impedance.is_some() {
            "supplied"
        } else {
            "width formula"
        },
    ));
    row(&mut out, "quantity", "line", "transmission", "reflection");
    row(
        &mut out,
        "field efficiency (A/m/sqrt(W))",
        &format!("{:.0}", report.line_efficiency.value),
        &format!("{:.0}", col.efficiency_impedance_transmission.value),
        &format!("{:.0}", col.efficiency_impedance_reflection.value),
    );
    row(
        &mut out,
        &format!(
            "pi-pulse power at {:.0} ns (W)",
            report.pi_pulse_duration.value * 1e9
        ),
        &format!("{:.3}", report.pi_power_line.value),
        &format!("{:.3}", col.pi_power_transmission.value),
        &format!("{:.3}", col.pi_power_reflection.value),
    );
    row(
        &mut out,
        "bandwidth (MHz)",
        "-",
        &format!("{:.1}", col.bandwidth_transmission.value / 1e6),
        &format!("{:.1}", col.bandwidth_reflection.value / 1e6),
    );
    row(
        &mut out,
        "ringing time (ns)",
        "-",
        &format!("{:.3}", col.ringing_transmission.value * 1e9),
        &format!("{:.3}", col.ringing_reflection.value * 1e9),
    );
    out.push_str(&format!(
        "\ncollection: full cone {:.1} deg -> {:.3}, hole-limited {:.1} deg -> {:.3}\n",
        report.optics.full_cone_angle.value,
        report.optics.full_collection_efficiency.value,
        report.optics.hole_cone_angle.value,
        report.optics.hole_collection_efficiency.value,
    ));
    out
}
