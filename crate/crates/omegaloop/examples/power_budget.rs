//! Power needed for a 50 ns pi pulse through each conversion route.
//!
//!     cargo run --example power_budget

use omegaloop::fields::{self, LoopSpec};
use omegaloop::nvphys::{self, NVConfig};
use omegaloop::resnet::{Mode, ResonatorParams};

fn main() -> omegaloop::Result<()> {
    let cfg = NVConfig::default();
    let drive_loop = LoopSpec::reference();
    let t_pi = 50e-9;
    let z_line = 50.0;
    let z_resonator = 10.4;

    let line = fields::loop_efficiency(&drive_loop, z_line)?;
    let tx = fields::high_beta_efficiency(Mode::Transmission, z_line, z_resonator, &drive_loop)?;
    let rx = fields::high_beta_efficiency(Mode::Reflection, z_line, z_resonator, &drive_loop)?;

    println!("{:<26} {:>13} {:>10}", "route", "A/m/sqrt(W)", "P_pi (W)");
    let routes = [
        ("loop on a matched line", &line),
        ("transmission resonator", &tx),
        ("reflection resonator", &rx),
    ];
    for (label, efficiency) in routes {
        let power = nvphys::power_for_pi(t_pi, efficiency, &cfg)?;
        println!("{:<26} {:>13.0} {:>10.3}", label, efficiency.value, power);
    }

    // The sqrt(Q0) peak-current route should bracket the impedance route
    // near the design point.
    let params = ResonatorParams::new(2.93e9, 74.0, 11.5, Mode::Transmission)?;
    let peak = fields::resonant_efficiency(&params, z_resonator, &drive_loop)?;
    println!(
        "\npeak-current cross-check: {:.0} A/m/sqrt(W) at beta = {:.1}",
        peak.value, params.coupling
    );
    Ok(())
}
