//! Trade strip impedance against bandwidth across resonator widths,
//! holding the resonance at the reference frequency.
//!
//!     cargo run --example width_sweep

use omegaloop::designer::{sweep_width, ResonatorGeometry};

fn main() -> omegaloop::Result<()> {
    let template = ResonatorGeometry::reference();
    let widths: Vec<f64> = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        .iter()
        .map(|w| w * 1e-3)
        .collect();

    // One Q for every width; pass one value per width to model the
    // (weak) width dependence instead.
    let rows = sweep_width(&template, &widths, &[74.0])?;

    println!(
        "{:>9} {:>10} {:>8} {:>7} {:>9} {:>10}",
        "width mm", "length mm", "Z ohm", "beta", "bw/f0", "eff ratio"
    );
    for row in rows {
        println!(
            "{:9.1} {:10.2} {:8.2} {:7.1} {:9.3} {:10.2}",
            row.resonator_width * 1e3,
            row.length * 1e3,
            row.strip_impedance,
            row.coupling,
            row.fractional_bandwidth,
            row.efficiency_ratio,
        );
    }
    println!();
    println!("wider strips couple harder and drive more field per watt,");
    println!("at the cost of a broader, lossier passband.");
    Ok(())
}
