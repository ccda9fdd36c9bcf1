//! Write a model trace to Touchstone, read it back, and convert formats.
//!
//!     cargo run --example touchstone_roundtrip

use omegaloop::fit;
use omegaloop::resnet::{Mode, ResonatorParams};
use omegaloop::sparams::{self, FrequencyUnit, NumberFormat};

fn main() -> omegaloop::Result<()> {
    let params = ResonatorParams::new(2.93e9, 74.0, 11.5, Mode::Reflection)?;
    let trace = fit::synthesize(&params, 2.6e9, 3.3e9, 8, None)?;

    let ma = sparams::write_touchstone(&trace, NumberFormat::MagnitudeAngle, FrequencyUnit::GigaHz);
    println!("magnitude/angle in GHz:\n{ma}");

    let (reparsed, options) = sparams::parse_touchstone(&ma)?;
    println!(
        "reparsed {} points, {} port(s), Z0 = {} ohm\n",
        reparsed.len(),
        reparsed.ports(),
        options.reference_impedance
    );

    let db = sparams::write_touchstone(&reparsed, NumberFormat::Db, FrequencyUnit::MegaHz);
    println!("the same data as dB in MHz:\n{db}");

    println!("and as the plotting sidecar:");
    print!("{}", sparams::write_csv_trace(&trace));
    Ok(())
}
