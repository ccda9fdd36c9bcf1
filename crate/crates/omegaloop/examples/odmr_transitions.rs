//! Ground-state transition frequencies under a static field, and the
//! drive numbers that follow from a measured Rabi rate.
//!
//!     cargo run --example odmr_transitions

use omegaloop::nvphys::{self, FieldVector, NVConfig};

fn main() -> omegaloop::Result<()> {
    let cfg = NVConfig::default();

    println!(
        "{:>9} {:>10} {:>10} {:>12}",
        "Bz (mT)", "f- (MHz)", "f+ (MHz)", "split (MHz)"
    );
    for bz_mt in [0.0, 2.0, 8.5, 20.0] {
        let field = FieldVector::new(0.0, 0.0, bz_mt * 1e-3)?;
        let (lower, upper) = nvphys::transition_frequencies(&field, &cfg)?;
        println!(
            "{:9.1} {:10.1} {:10.1} {:12.1}",
            bz_mt,
            lower / 1e6,
            upper / 1e6,
            (upper - lower) / 1e6
        );
    }

    // A transverse component mixes the sublevels, so the splitting stops
    // being linear in the field magnitude.
    let skewed = FieldVector::new(3e-3, 0.0, 1e-3)?;
    let (lower, upper) = nvphys::transition_frequencies(&skewed, &cfg)?;
    println!(
        "\n3 mT transverse + 1 mT axial: f- = {:.1} MHz, f+ = {:.1} MHz",
        lower / 1e6,
        upper / 1e6
    );

    let axial = nvphys::axial_field_from_splitting(476e6, &cfg)?;
    println!("a 476 MHz splitting implies {:.2} mT along the axis", axial * 1e3);

    let rabi = nvphys::rabi_from_field(840.0, &cfg)?;
    let t_pi = nvphys::pi_pulse_duration(rabi)?;
    let bandwidth = nvphys::excitation_bandwidth(t_pi)?;
    println!(
        "840 A/m drives {:.1} MHz Rabi: {:.1} ns pi pulse, {:.1} MHz excitation bandwidth",
        rabi / 1e6,
        t_pi * 1e9,
        bandwidth / 1e6
    );
    Ok(())
}
