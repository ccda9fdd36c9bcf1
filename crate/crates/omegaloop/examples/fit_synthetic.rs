//! Round-trip a noisy synthetic trace through the fitter.
//!
//!     cargo run --example fit_synthetic

use omegaloop::fit::{self, FitConfig, NoiseSpec};
use omegaloop::resnet::{Mode, ResonatorParams};

fn main() -> omegaloop::Result<()> {
    let truth = ResonatorParams::new(2.93e9, 74.0, 11.5, Mode::Transmission)?;
    let noise = NoiseSpec {
        floor_db: -60.0,
        seed: 8,
    };
    let trace = fit::synthesize(&truth, 1e9, 5e9, 401, Some(&noise))?;

    let result = fit::fit_transmission(&trace, &FitConfig::default())?;
    let sigma = result
        .parameter_uncertainties
        .expect("noiseless covariance is well conditioned here");

    println!(
        "truth:  f0 = {:.5} GHz              Q0 = {:5.1}          beta = {:5.2}",
        truth.resonance_frequency / 1e9,
        truth.unloaded_q,
        truth.coupling
    );
    println!(
        "fitted: f0 = {:.5} +/- {:.5} GHz   Q0 = {:5.1} +/- {:.1}  beta = {:5.2} +/- {:.2}",
        result.params.resonance_frequency / 1e9,
        sigma.resonance_frequency / 1e9,
        result.params.unloaded_q,
        sigma.unloaded_q,
        result.params.coupling,
        sigma.coupling
    );
    println!(
        "residual rms {:.2} dB over the fit window, {} iterations, converged: {}",
        result.residual_rms, result.iterations, result.converged
    );
    Ok(())
}
