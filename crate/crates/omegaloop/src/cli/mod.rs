//! Command-line front end.
//!
//! Thin argument plumbing over the library: every verb parses options,
//! calls one or two library functions, and prints. Data goes to stdout or
//! the `--out` file; diagnostics go to stderr. Exit codes: 0 success,
//! 1 usage or domain error, 2 unreadable or unparseable input data,
//! 3 fit did not converge.

mod units;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::designer::{self, DesignOptions, ResonatorGeometry};
use crate::error::{Error, Result};
use crate::fields::{self, LoopSpec};
use crate::fit::{self, CouplingBranch, FitConfig, NoiseSpec, ObjectiveSpace};
use crate::nvphys::{self, FieldVector, NVConfig};
use crate::optics;
use crate::report;
use crate::resnet::{self, Mode, ResonatorParams};
use crate::sparams::{self, FrequencyUnit, NumberFormat, SParamTrace};
use crate::txline::SubstrateSpec;

/// Entry point for the binary: parses the process arguments (including
/// the program name) and maps everything onto the exit code.
pub fn run(args: &[String]) -> i32 {
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run_with(args, &mut out, &mut err)
}

/// Testable entry point with injected streams. `args[0]` is the program
/// name, as in `std::env::args`.
pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::Unsupported(_) | Error::NoResonance(_) => 2,
        Error::DegenerateFit(_) => 3,
        _ => 1,
    }
}

#[derive(Parser)]
#[command(
    name = "omegaloop",
    about = "Microwave loop resonator toolbox: fit traces, evaluate designs, convert units",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract resonator parameters from a Touchstone or CSV trace
    Fit(FitArgs),
    /// Evaluate a resonator geometry into a performance report
    Design(DesignArgs),
    /// Magnetic field and conversion-efficiency calculations
    Field(FieldArgs),
    /// NV spin physics: Rabi rates, pulse powers, transition frequencies
    Nv(NvArgs),
    /// Collection optics: cone angles, efficiencies, resolution
    Optics(OpticsArgs),
    /// Convert a trace between Touchstone formats, units, and CSV
    Convert(ConvertArgs),
    /// Generate a synthetic trace from model parameters
    Synth(SynthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Transmission,
    Reflection,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Transmission => Mode::Transmission,
            ModeArg::Reflection => Mode::Reflection,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Over,
    Under,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Db,
    Ma,
    Ri,
}

impl From<FormatArg> for NumberFormat {
    fn from(f: FormatArg) -> NumberFormat {
        match f {
            FormatArg::Db => NumberFormat::Db,
            FormatArg::Ma => NumberFormat::MagnitudeAngle,
            FormatArg::Ri => NumberFormat::RealImaginary,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitArg {
    Hz,
    Khz,
    Mhz,
    Ghz,
}

impl From<UnitArg> for FrequencyUnit {
    fn from(u: UnitArg) -> FrequencyUnit {
        match u {
            UnitArg::Hz => FrequencyUnit::Hz,
            UnitArg::Khz => FrequencyUnit::KiloHz,
            UnitArg::Mhz => FrequencyUnit::MegaHz,
            UnitArg::Ghz => FrequencyUnit::GigaHz,
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Fit(args) => cmd_fit(args, out, err),
        Command::Design(args) => cmd_design(args, out),
        Command::Field(args) => cmd_field(args, out),
        Command::Nv(args) => cmd_nv(args, out),
        Command::Optics(args) => cmd_optics(args, out),
        Command::Convert(args) => cmd_convert(args, out),
        Command::Synth(args) => cmd_synth(args, out),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_trace(path: &Path, tolerant: bool) -> Result<SParamTrace> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return sparams::read_csv_trace(&text);
    }
    let (trace, _) = if tolerant {
        sparams::parse_touchstone_tolerant(&text)?
    } else {
        sparams::parse_touchstone(&text)?
    };
    Ok(trace)
}

// ---------------------------------------------------------------- fit

#[derive(Args)]
struct FitArgs {
    /// Coupling mode of the model to fit
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Input trace: .s1p/.s2p Touchstone, or .csv magnitude sidecar
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the fit JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit window half-width on both sides of the resonance (e.g. 500MHz)
    #[arg(long, value_parser = units::parse_frequency)]
    window: Option<f64>,
    /// Override the window half-width below the resonance
    #[arg(long, value_parser = units::parse_frequency)]
    window_below: Option<f64>,
    /// Override the window half-width above the resonance
    #[arg(long, value_parser = units::parse_frequency)]
    window_above: Option<f64>,
    /// Fit linear magnitudes instead of dB
    #[arg(long)]
    linear: bool,
    /// Fit a common amplitude offset along with the resonator parameters
    #[arg(long)]
    baseline: bool,
    /// Reflection coupling branch to report
    #[arg(long, value_enum, default_value_t = BranchArg::Over)]
    branch: BranchArg,
    /// Sort out-of-order Touchstone rows instead of rejecting them
    #[arg(long)]
    tolerant: bool,
    /// Also write a data-plus-model overlay CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// The fit report as written to `--out`.
#[derive(Serialize)]
struct FitJson {
    mode: String,
    f0_hz: f64,
    q0: f64,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    baseline_db: Option<f64>,
    residual_rms: f64,
    iterations: usize,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    f0_sigma_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q0_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_sigma: Option<f64>,
}

fn cmd_fit(args: FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let trace = read_trace(&args.input, args.tolerant)?;
    let window = match (args.window, args.window_below, args.window_above) {
        (None, None, None) => None,
        (w, below, above) => {
            let base = w.unwrap_or(0.0);
            let b = below.unwrap_or(base);
            let a = above.unwrap_or(base);
            Some((b, a))
        }
    };
    let config = FitConfig {
        window,
        objective_space: if args.linear {
            ObjectiveSpace::LinearMagnitude
        } else {
            ObjectiveSpace::Decibel
        },
        amplitude_baseline: args.baseline,
        branch: match args.branch {
            BranchArg::Over => CouplingBranch::Overcoupled,
            BranchArg::Under => CouplingBranch::Undercoupled,
        },
        ..FitConfig::default()
    };
    let mode: Mode = args.mode.into();
    let result = match mode {
        Mode::Transmission => fit::fit_transmission(&trace, &config)?,
        Mode::Reflection => fit::fit_reflection(&trace, &config)?,
    };
    let json = FitJson {
        mode: result.params.mode.to_string(),
        f0_hz: result.params.resonance_frequency,
        q0: result.params.unloaded_q,
        beta: result.params.coupling,
        baseline_db: result.baseline_db,
        residual_rms: result.residual_rms,
        iterations: result.iterations,
        converged: result.converged,
        f0_sigma_hz: result
            .parameter_uncertainties
            .map(|u| u.resonance_frequency),
        q0_sigma: result.parameter_uncertainties.map(|u| u.unloaded_q),
        beta_sigma: result.parameter_uncertainties.map(|u| u.coupling),
    };
    let mut text = report::to_sorted_json(&json)?;
    text.push('\n');
    emit(&text, args.out.as_deref(), out)?;

    if let Some(csv_path) = &args.csv {
        let overlay = model_overlay_csv(&trace, &result.params, result.baseline_db)?;
        std::fs::write(csv_path, overlay)?;
    }
    if !result.converged {
        writeln!(
            err,
            "fit did not converge within {} iterations",
            result.iterations
        )?;
        return Ok(3);
    }
    Ok(0)
}

/// Plot-ready columns over the full input grid: measured magnitudes next
/// to the fitted model, all in dB.
fn model_overlay_csv(
    trace: &SParamTrace,
    params: &ResonatorParams,
    baseline_db: Option<f64>,
) -> Result<String> {
    let baseline = baseline_db.unwrap_or(0.0);
    let db = |m: f64| -> f64 {
        if m > 0.0 {
            (20.0 * m.log10()).max(-600.0)
        } else {
            -600.0
        }
    };
    let mut text = String::new();
    match (params.mode, &trace.two_port) {
        (Mode::Transmission, Some(tp)) => {
            text.push_str("frequency_hz,s11_db,s21_db,model_s11_db,model_s21_db\n");
            for i in 0..trace.len() {
                let f = trace.frequencies[i];
                let sp = resnet::two_port_response(params, f)?;
                text.push_str(&format!(
                    "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                    f,
                    db(trace.s11[i].norm()),
                    db(tp.s21[i].norm()),
                    db(sp.gamma.norm()) + baseline,
                    db(sp.t.expect("two-port carries t").norm()) + baseline,
                ));
            }
        }
        (Mode::Transmission, None) => {
            return Err(Error::domain("transmission overlay needs a two-port trace"));
        }
        (Mode::Reflection, _) => {
            text.push_str("frequency_hz,s11_db,model_s11_db\n");
            for i in 0..trace.len() {
                let f = trace.frequencies[i];
                let gamma = resnet::one_port_response(params, f)?;
                text.push_str(&format!(
                    "{:.12e},{:.12e},{:.12e}\n",
                    f,
                    db(trace.s11[i].norm()),
                    db(gamma.norm()) + baseline,
                ));
            }
        }
    }
    Ok(text)
}

// ------------------------------------------------------------- design

#[derive(Args)]
struct DesignArgs {
    /// Named starting geometry; "reference" is the bundled design point
    #[arg(long, default_value = "reference")]
    preset: String,
    /// Resonator strip width
    #[arg(long, value_parser = units::parse_length)]
    width: Option<f64>,
    /// Resonator strip length
    #[arg(long, value_parser = units::parse_length)]
    length: Option<f64>,
    /// Feed line width
    #[arg(long, value_parser = units::parse_length)]
    feed_width: Option<f64>,
    /// Coupling gap
    #[arg(long, value_parser = units::parse_length)]
    gap: Option<f64>,
    /// Optical hole diameter
    #[arg(long, value_parser = units::parse_length)]
    hole: Option<f64>,
    /// Loading length of the loop and gap discontinuities
    #[arg(long, value_parser = units::parse_length)]
    loading: Option<f64>,
    /// Substrate relative permittivity
    #[arg(long)]
    rel_permittivity: Option<f64>,
    /// Unloaded quality factor (external input)
    #[arg(long, default_value_t = 74.0)]
    q0: f64,
    /// Resonator impedance from an EM solver or measurement, ohm
    #[arg(long)]
    z_resonator: Option<f64>,
    /// Feed line impedance, ohm
    #[arg(long, default_value_t = 50.0)]
    z_line: f64,
    /// Pulse length for the power rows
    #[arg(long, value_parser = units::parse_duration, default_value = "50ns")]
    tpi: f64,
    /// Render the plain-text table instead of JSON
    #[arg(long)]
    text: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_design(args: DesignArgs, out: &mut dyn Write) -> Result<i32> {
    if args.preset != "reference" {
        return Err(Error::domain(format!(
            "unknown preset '{}'; available: reference",
            args.preset
        )));
    }
    let mut geometry = ResonatorGeometry::reference();
    if let Some(w) = args.width {
        geometry.resonator_width = w;
    }
    if let Some(l) = args.length {
        geometry.length = l;
    }
    if let Some(w) = args.feed_width {
        geometry.feed_width = w;
    }
    if let Some(g) = args.gap {
        geometry.gap = g;
    }
    if let Some(h) = args.hole {
        geometry.optical_hole = h;
    }
    if let Some(l) = args.loading {
        geometry.loading_length = l;
    }
    if let Some(er) = args.rel_permittivity {
        let s = &geometry.substrate;
        geometry.substrate = SubstrateSpec::new(
            er,
            s.loss_tangent,
            s.dielectric_thickness,
            s.cladding_thickness,
            s.conductor_resistivity,
        )?;
    }
    // re-validate after the overrides
    let geometry = ResonatorGeometry::new(
        geometry.feed_width,
        geometry.resonator_width,
        geometry.length,
        geometry.gap,
        geometry.drive_loop.clone(),
        geometry.optical_hole,
        geometry.substrate.clone(),
        geometry.loading_length,
    )?;
    let options = DesignOptions {
        q_unloaded: args.q0,
        line_impedance: args.z_line,
        supplied_z_resonator: args.z_resonator,
        pi_pulse_duration: args.tpi,
    };
    let report_data = designer::evaluate_design(&geometry, &options)?;
    let text = if args.text {
        report::render_text(&report_data)
    } else {
        let mut t = report::to_sorted_json(&report_data)?;
        t.push('\n');
        t
    };
    emit(&text, args.out.as_deref(), out)?;
    Ok(0)
}

// -------------------------------------------------------------- field

#[derive(Args)]
struct FieldArgs {
    #[command(subcommand)]
    command: FieldCmd,
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Field of a straight wire at a radial distance
    Wire {
        #[arg(long, value_parser = units::parse_power, default_value = "1W")]
        power: f64,
        #[arg(long, default_value_t = 50.0)]
        impedance: f64,
        /// Radial distance from the wire axis
        #[arg(long, value_parser = units::parse_length)]
        distance: f64,
    },
    /// Center-field efficiency of a loop fed by a matched line
    Loop {
        #[arg(long, default_value_t = 50.0)]
        impedance: f64,
        /// Loop inner diameter
        #[arg(long, value_parser = units::parse_length, default_value = "400um")]
        diameter: f64,
        /// Real-to-ideal center field ratio; 1 gives the analytic bound
        #[arg(long, default_value_t = 0.49)]
        derating: f64,
        /// Also print the field at this input power
        #[arg(long, value_parser = units::parse_power)]
        power: Option<f64>,
    },
    /// Efficiency of the resonant loop via the sqrt(Q) peak-current route
    Resonant {
        #[arg(long)]
        q0: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_parser = units::parse_frequency)]
        f0: f64,
        #[arg(long)]
        z_resonator: f64,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_parser = units::parse_length, default_value = "400um")]
        diameter: f64,
        #[arg(long, default_value_t = 0.49)]
        derating: f64,
    },
    /// Strong-overcoupling efficiency via the impedance-transformation route
    HighBeta {
        #[arg(long, default_value_t = 50.0)]
        z_line: f64,
        #[arg(long)]
        z_resonator: f64,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_parser = units::parse_length, default_value = "400um")]
        diameter: f64,
        #[arg(long, default_value_t = 0.49)]
        derating: f64,
    },
    /// On-axis field decay above the loop
    Axial {
        /// Field at the loop plane, A/m
        #[arg(long)]
        surface: f64,
        /// Effective loop diameter
        #[arg(long, value_parser = units::parse_length, default_value = "400um")]
        diameter: f64,
        /// Height above the loop plane
        #[arg(long, value_parser = units::parse_length)]
        height: f64,
    },
}

fn loop_spec_with(diameter: f64, derating: f64) -> Result<LoopSpec> {
    let reference = LoopSpec::reference();
    LoopSpec::new(
        diameter,
        reference.conductor_width,
        reference.gap,
        derating,
    )
}

fn cmd_field(args: FieldArgs, out: &mut dyn Write) -> Result<i32> {
    match args.command {
        FieldCmd::Wire {
            power,
            impedance,
            distance,
        } => {
            let h = fields::wire_field(power, impedance, distance)?;
            writeln!(out, "{h:.1} A/m")?;
        }
        FieldCmd::Loop {
            impedance,
            diameter,
            derating,
            power,
        } => {
            let spec = loop_spec_with(diameter, derating)?;
            let eff = fields::loop_efficiency(&spec, impedance)?;
            writeln!(out, "{:.1} A/m/sqrt(W)", eff.value)?;
            if let Some(p) = power {
                writeln!(out, "{:.1} A/m at {:.3} W", eff.value * p.sqrt(), p)?;
            }
        }
        FieldCmd::Resonant {
            q0,
            beta,
            f0,
            z_resonator,
            mode,
            diameter,
            derating,
        } => {
            let params = ResonatorParams::new(f0, q0, beta, mode.into())?;
            let spec = loop_spec_with(diameter, derating)?;
            let eff = fields::resonant_efficiency(&params, z_resonator, &spec)?;
            writeln!(out, "{:.1} A/m/sqrt(W)", eff.value)?;
        }
        FieldCmd::HighBeta {
            z_line,
            z_resonator,
            mode,
            diameter,
            derating,
        } => {
            let spec = loop_spec_with(diameter, derating)?;
            let eff = fields::high_beta_efficiency(mode.into(), z_line, z_resonator, &spec)?;
            writeln!(out, "{:.1} A/m/sqrt(W)", eff.value)?;
        }
        FieldCmd::Axial {
            surface,
            diameter,
            height,
        } => {
            let h = fields::axial_decay(surface, diameter, height)?;
            writeln!(out, "{h:.1} A/m")?;
        }
    }
    Ok(0)
}

// ----------------------------------------------------------------- nv

#[derive(Args)]
struct NvArgs {
    #[command(subcommand)]
    command: NvCmd,
}

#[derive(Subcommand)]
enum NvCmd {
    /// Input power for a pi pulse of the given length
    PiPower {
        #[arg(long, value_parser = units::parse_duration)]
        tpi: f64,
        /// Conversion efficiency, A/m/sqrt(W)
        #[arg(long)]
        efficiency: f64,
    },
    /// Rabi rate of a drive field
    Rabi {
        /// Drive field amplitude, A/m
        #[arg(long)]
        field: f64,
    },
    /// Drive field referred to a reference power, from a measured Rabi rate
    Field {
        #[arg(long, value_parser = units::parse_frequency)]
        rabi: f64,
        /// Power the Rabi rate was measured at
        #[arg(long, value_parser = units::parse_power, default_value = "1W")]
        power: f64,
        /// Power to refer the field to
        #[arg(long, value_parser = units::parse_power, default_value = "1W")]
        at: f64,
    },
    /// Ground-state transition frequencies in a static field
    Transitions {
        /// Lab-frame field component, e.g. 3mT (negative values allowed)
        #[arg(long, value_parser = units::parse_magnetic_field, default_value = "0", allow_hyphen_values = true)]
        bx: f64,
        #[arg(long, value_parser = units::parse_magnetic_field, default_value = "0", allow_hyphen_values = true)]
        by: f64,
        #[arg(long, value_parser = units::parse_magnetic_field, default_value = "0", allow_hyphen_values = true)]
        bz: f64,
    },
    /// Axial field that produces a given transition splitting
    Splitting {
        #[arg(long, value_parser = units::parse_frequency)]
        delta: f64,
    },
    /// Excitation bandwidth of a pi pulse
    Bandwidth {
        #[arg(long, value_parser = units::parse_duration)]
        tpi: f64,
    },
}

fn cmd_nv(args: NvArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = NVConfig::default();
    match args.command {
        NvCmd::PiPower { tpi, efficiency } => {
            let eff = fields::FieldEfficiency {
                value: efficiency,
                provenance: fields::Provenance::External,
                frequency: None,
            };
            let p = nvphys::power_for_pi(tpi, &eff, &cfg)?;
            writeln!(out, "{p:.3} W")?;
        }
        NvCmd::Rabi { field } => {
            let f = nvphys::rabi_from_field(field, &cfg)?;
            writeln!(out, "{:.3} MHz", f / 1e6)?;
        }
        NvCmd::Field { rabi, power, at } => {
            let h = nvphys::field_from_rabi(rabi, power, at, &cfg)?;
            writeln!(out, "{h:.1} A/m at {at:.3} W")?;
        }
        NvCmd::Transitions { bx, by, bz } => {
            let b = FieldVector::new(bx, by, bz)?;
            let (lower, upper) = nvphys::transition_frequencies(&b, &cfg)?;
            writeln!(out, "f- = {:.3} MHz", lower / 1e6)?;
            writeln!(out, "f+ = {:.3} MHz", upper / 1e6)?;
            writeln!(out, "splitting = {:.3} MHz", (upper - lower) / 1e6)?;
        }
        NvCmd::Splitting { delta } => {
            let b = nvphys::axial_field_from_splitting(delta, &cfg)?;
            writeln!(out, "{:.4} mT", b * 1e3)?;
        }
        NvCmd::Bandwidth { tpi } => {
            let bw = nvphys::excitation_bandwidth(tpi)?;
            writeln!(out, "{:.3} MHz", bw / 1e6)?;
        }
    }
    Ok(0)
}

// ------------------------------------------------------------- optics

#[derive(Args)]
struct OpticsArgs {
    #[command(subcommand)]
    command: OpticsCmd,
}

const REFERENCE_STACK_NOTE: &str = "defaults to the reference board stack";

#[derive(Subcommand)]
enum OpticsCmd {
    /// Collection efficiency of an objective, or of an explicit cone angle
    Collection {
        #[arg(long, default_value_t = 1.4)]
        na: f64,
        /// Immersion index
        #[arg(long, default_value_t = 1.518)]
        n: f64,
        /// Explicit cone half-angle; overrides the NA route
        #[arg(long, value_parser = units::parse_angle)]
        angle: Option<f64>,
    },
    /// Cone angle and efficiency admitted by an optical hole
    Hole {
        #[arg(long, value_parser = units::parse_length)]
        diameter: f64,
        /// Board stack thickness the cone traverses
        #[arg(long, value_parser = units::parse_length, help = REFERENCE_STACK_NOTE)]
        stack: Option<f64>,
    },
    /// Hole diameter that admits a given cone half-angle
    HoleForAngle {
        #[arg(long, value_parser = units::parse_angle)]
        angle: f64,
        #[arg(long, value_parser = units::parse_length, help = REFERENCE_STACK_NOTE)]
        stack: Option<f64>,
    },
    /// Rescale a measured resolution between aperture angles
    Rescale {
        #[arg(long, value_parser = units::parse_length)]
        fwhm: f64,
        /// Angle the measurement was taken at
        #[arg(long, value_parser = units::parse_angle)]
        from: f64,
        /// Angle to rescale to
        #[arg(long, value_parser = units::parse_angle)]
        to: f64,
    },
    /// Diffraction-limited spot size
    Airy {
        #[arg(long, value_parser = units::parse_length)]
        wavelength: f64,
        #[arg(long, default_value_t = 1.4)]
        na: f64,
    },
}

fn cmd_optics(args: OpticsArgs, out: &mut dyn Write) -> Result<i32> {
    let default_stack = SubstrateSpec::reference().stack_thickness();
    match args.command {
        OpticsCmd::Collection { na, n, angle } => {
            let alpha = match angle {
                Some(a) => a,
                None => optics::cone_angle_from_na(&optics::ObjectiveSpec::new(na, n, None)?)?,
            };
            let fce = optics::collection_efficiency(alpha)?;
            writeln!(out, "cone half-angle = {:.2} deg", alpha.to_degrees())?;
            writeln!(out, "collection efficiency = {fce:.4}")?;
        }
        OpticsCmd::Hole { diameter, stack } => {
            let alpha = optics::cone_angle_from_hole(diameter, stack.unwrap_or(default_stack))?;
            let fce = optics::collection_efficiency(alpha)?;
            writeln!(out, "cone half-angle = {:.2} deg", alpha.to_degrees())?;
            writeln!(out, "collection efficiency = {fce:.4}")?;
        }
        OpticsCmd::HoleForAngle { angle, stack } => {
            let d = optics::hole_for_angle(angle, stack.unwrap_or(default_stack))?;
            writeln!(out, "{:.4} mm", d * 1e3)?;
        }
        OpticsCmd::Rescale { fwhm, from, to } => {
            let rescaled = optics::resolution_rescale(fwhm, from, to)?;
            writeln!(out, "{:.1} nm", rescaled * 1e9)?;
        }
        OpticsCmd::Airy { wavelength, na } => {
            let fwhm = optics::airy_fwhm(wavelength, na)?;
            writeln!(out, "{:.1} nm", fwhm * 1e9)?;
        }
    }
    Ok(0)
}

// ------------------------------------------------------------ convert

#[derive(Args)]
struct ConvertArgs {
    /// Input trace: .s1p/.s2p Touchstone, or .csv magnitude sidecar
    #[arg(long = "in")]
    input: PathBuf,
    /// Output path; a .csv extension selects the CSV sidecar format
    #[arg(long)]
    out: PathBuf,
    /// Touchstone number format for the output
    #[arg(long, value_enum, default_value_t = FormatArg::Ma)]
    format: FormatArg,
    /// Touchstone frequency unit for the output
    #[arg(long, value_enum, default_value_t = UnitArg::Ghz)]
    unit: UnitArg,
    /// Sort out-of-order Touchstone rows instead of rejecting them
    #[arg(long)]
    tolerant: bool,
}

fn cmd_convert(args: ConvertArgs, out: &mut dyn Write) -> Result<i32> {
    let trace = read_trace(&args.input, args.tolerant)?;
    let text = if args
        .out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        sparams::write_csv_trace(&trace)
    } else {
        sparams::write_touchstone(&trace, args.format.into(), args.unit.into())
    };
    std::fs::write(&args.out, &text)?;
    writeln!(
        out,
        "wrote {} points ({} ports) to {}",
        trace.len(),
        trace.ports(),
        args.out.display()
    )?;
    Ok(0)
}

// -------------------------------------------------------------- synth

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Transmission)]
    mode: ModeArg,
    #[arg(long)]
    q0: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_parser = units::parse_frequency)]
    f0: f64,
    #[arg(long, value_parser = units::parse_frequency)]
    start: f64,
    #[arg(long, value_parser = units::parse_frequency)]
    stop: f64,
    #[arg(long, default_value_t = 401)]
    points: usize,
    /// Add a complex noise floor at this level, dB (e.g. -60)
    #[arg(long, allow_negative_numbers = true)]
    noise_floor: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Ma)]
    format: FormatArg,
    #[arg(long, value_enum, default_value_t = UnitArg::Ghz)]
    unit: UnitArg,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_synth(args: SynthArgs, out: &mut dyn Write) -> Result<i32> {
    let params = ResonatorParams::new(args.f0, args.q0, args.beta, args.mode.into())?;
    let noise = args.noise_floor.map(|floor_db| NoiseSpec {
        floor_db,
        seed: args.seed,
    });
    let trace = fit::synthesize(&params, args.start, args.stop, args.points, noise.as_ref())?;
    let text = sparams::write_touchstone(&trace, args.format.into(), args.unit.into());
    emit(&text, args.out.as_deref(), out)?;
    Ok(0)
}
