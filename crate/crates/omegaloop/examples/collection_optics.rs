//! How big must the board hole be before it stops costing photons?
//!
//!     cargo run --example collection_optics

use omegaloop::optics::{self, ObjectiveSpec};
use omegaloop::txline::SubstrateSpec;

fn main() -> omegaloop::Result<()> {
    let objective = ObjectiveSpec::new(1.4, 1.518, None)?;
    let alpha_full = optics::cone_angle_from_na(&objective)?;
    let fce_full = optics::collection_efficiency(alpha_full)?;
    println!(
        "NA 1.4 oil objective: {:.1} deg half-angle, {:.1}% of emitted photons",
        alpha_full.to_degrees(),
        fce_full * 100.0
    );

    let stack = SubstrateSpec::reference().stack_thickness();
    println!(
        "\n{:>9} {:>11} {:>11} {:>6}",
        "hole mm", "angle deg", "collect %", "loss"
    );
    for d_mm in [0.2, 0.3, 0.5, 0.78, 1.0] {
        let admitted = optics::cone_angle_from_hole(d_mm * 1e-3, stack)?;
        // past ~0.78 mm the objective, not the hole, is the bottleneck
        let alpha = admitted.min(alpha_full);
        let fce = optics::collection_efficiency(alpha)?;
        println!(
            "{:9.2} {:11.1} {:11.1} {:6.2}",
            d_mm,
            alpha.to_degrees(),
            fce * 100.0,
            fce_full / fce
        );
    }

    let matched = optics::hole_for_angle(alpha_full, stack)?;
    println!("\nhole admitting the full cone: {:.2} mm", matched * 1e3);

    let alpha_hole = optics::cone_angle_from_hole(0.3e-3, stack)?;
    let rescaled = optics::resolution_rescale(300e-9, alpha_hole, alpha_full)?;
    println!(
        "a 300 nm spot measured through the 0.3 mm hole is {:.0} nm at full aperture",
        rescaled * 1e9
    );
    println!(
        "diffraction floor at 700 nm emission: {:.0} nm",
        optics::airy_fwhm(700e-9, 1.4)? * 1e9
    );
    Ok(())
}
