//! Where the same board family lands when the strip is trimmed or the
//! substrate is swapped.
//!
//!     cargo run --example tuning_range

use omegaloop::designer::{self, ResonatorGeometry};
use omegaloop::txline::{self, SubstrateSpec};

fn main() -> omegaloop::Result<()> {
    let geometry = ResonatorGeometry::reference();

    let (low, high) = designer::tuning_range(&geometry, 5e-3, 56e-3)?;
    println!(
        "strip lengths 5..56 mm tune {:.2}..{:.2} GHz",
        low / 1e9,
        high / 1e9
    );

    let target = 2.93e9;
    let length = txline::length_for_frequency(
        target,
        geometry.resonator_width,
        &geometry.substrate,
        geometry.loading_length,
    )?;
    println!(
        "hitting {:.2} GHz takes a {:.2} mm strip",
        target / 1e9,
        length * 1e3
    );

    let board = geometry.substrate.clone();
    let alumina = SubstrateSpec::new(
        10.0,
        board.loss_tangent,
        board.dielectric_thickness,
        board.cladding_thickness,
        board.conductor_resistivity,
    )?;
    let ratio = designer::substrate_scaling(&geometry, &board, &alumina)?;
    println!(
        "the same geometry on an er = 10 substrate lands {ratio:.2}x lower, near {:.2} GHz",
        target / 1e9 / ratio
    );
    Ok(())
}
