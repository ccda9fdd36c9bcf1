//! On-axis field above the loop, the effective diameter recovered from
//! height samples, and the measured corridors for comparison.
//!
//!     cargo run --example field_profile

use omegaloop::fields::{self, tables};

fn main() -> omegaloop::Result<()> {
    // Field at the loop plane for 1 W in, and the effective diameter of
    // the current distribution (a little wider than the 0.4 mm opening).
    let h0 = 1190.0;
    let diameter = 0.44e-3;

    println!("{:>8} {:>10}", "z (um)", "H (A/m)");
    let mut samples = Vec::new();
    for z_um in [5.0, 10.0, 20.0, 50.0, 100.0, 200.0] {
        let z = z_um * 1e-6;
        let h = fields::axial_decay(h0, diameter, z)?;
        println!("{z_um:8.0} {h:10.1}");
        samples.push((z, h));
    }

    let recovered = fields::fit_effective_diameter(&samples)?;
    println!(
        "\ndiameter fit over those samples: h0 = {:.1} A/m, D_eff = {:.3} mm, rms {:.1e} A/m",
        recovered.h0,
        recovered.effective_diameter * 1e3,
        recovered.residual_rms
    );

    println!("\nagainst the measured pillar corridors:");
    for z_um in [10.0, 100.0] {
        if let Some(row) = tables::field_corridor(z_um * 1e-6, tables::Region::Pillar)? {
            let h = fields::axial_decay(h0, diameter, row.height)?;
            let verdict = if h >= row.min_field && h <= row.max_field {
                "inside"
            } else {
                "outside"
            };
            println!(
                "  {:>4.0} um: model {:6.1} A/m, measured {:.0}..{:.0} ({verdict})",
                z_um, h, row.min_field, row.max_field
            );
        }
    }
    Ok(())
}
