//! Evaluate the reference board and print its datasheet.
//!
//!     cargo run --example design_report

use omegaloop::designer::{evaluate_design, DesignOptions, ResonatorGeometry};
use omegaloop::report;

fn main() -> omegaloop::Result<()> {
    let geometry = ResonatorGeometry::reference();

    // The width formula is poor at 3 mm; feed the simulated strip
    // impedance in alongside it and the report carries both columns.
    let options = DesignOptions {
        supplied_z_resonator: Some(10.4),
        ..DesignOptions::default()
    };

    let design = evaluate_design(&geometry, &options)?;
    print!("{}", report::render_text(&design));

    println!();
    println!("model limits:");
    for limit in &design.model_limits {
        println!("  - {limit}");
    }
    Ok(())
}
