//! End-to-end runs of the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omegaloop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

#[test]
fn synth_reproduces_the_golden_files_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();

    let two_port = dir.path().join("t.s2p");
    let output = run(&[
        "synth",
        "--q0",
        "74",
        "--beta",
        "11.5",
        "--f0",
        "2.93GHz",
        "--start",
        "1GHz",
        "--stop",
        "5GHz",
        "--points",
        "401",
        "--out",
        two_port.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(
        std::fs::read(&two_port).unwrap(),
        std::fs::read(golden("reference_transmission.s2p")).unwrap()
    );

    let one_port = dir.path().join("r.s1p");
    let output = run(&[
        "synth",
        "--mode",
        "reflection",
        "--q0",
        "70",
        "--beta",
        "8.3",
        "--f0",
        "2.93GHz",
        "--start",
        "1GHz",
        "--stop",
        "5GHz",
        "--points",
        "401",
        "--format",
        "db",
        "--unit",
        "mhz",
        "--out",
        one_port.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(
        std::fs::read(&one_port).unwrap(),
        std::fs::read(golden("reference_reflection.s1p")).unwrap()
    );
}

#[test]
fn golden_trace_dips_at_resonance() {
    let text = std::fs::read_to_string(golden("reference_transmission.s2p")).unwrap();
    let (trace, _) = omegaloop::sparams::parse_touchstone(&text).unwrap();
    let (index, s11) = trace
        .s11
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    assert_eq!(index, 193, "dip off the 2.93 GHz grid point");
    assert!((trace.frequencies[index] - 2.93e9).abs() <= 1.0);
    let depth_db = 20.0 * s11.norm().log10();
    let expected = -27.604224834232124;
    assert!(
        (depth_db - expected).abs() <= 1e-9 * expected.abs(),
        "dip {depth_db} dB"
    );
}

#[test]
fn fit_recovers_what_synth_generated() {
    let dir = tempfile::tempdir().unwrap();
    let s2p = dir.path().join("device.s2p");
    let json_path = dir.path().join("fit.json");

    let output = run(&[
        "synth",
        "--q0",
        "74",
        "--beta",
        "11.5",
        "--f0",
        "2.93GHz",
        "--start",
        "1GHz",
        "--stop",
        "5GHz",
        "--points",
        "401",
        "--out",
        s2p.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let output = run(&[
        "fit",
        "--mode",
        "transmission",
        "--in",
        s2p.to_str().unwrap(),
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["mode"], "transmission");
    assert_eq!(json["converged"], true);
    assert!((json["q0"].as_f64().unwrap() - 74.0).abs() < 0.01);
    assert!((json["beta"].as_f64().unwrap() - 11.5).abs() < 0.01);
    assert!((json["f0_hz"].as_f64().unwrap() - 2.93e9).abs() < 1e5);
    assert!(json["q0_sigma"].as_f64().unwrap() >= 0.0);
}

#[test]
fn fit_writes_a_model_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let s2p = dir.path().join("device.s2p");
    let csv = dir.path().join("overlay.csv");
    assert!(run(&[
        "synth",
        "--q0",
        "74",
        "--beta",
        "11.5",
        "--f0",
        "2.93GHz",
        "--start",
        "2GHz",
        "--stop",
        "4GHz",
        "--points",
        "201",
        "--out",
        s2p.to_str().unwrap(),
    ])
    .status
    .success());
    assert!(run(&[
        "fit",
        "--mode",
        "transmission",
        "--in",
        s2p.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "frequency_hz,s11_db,s21_db,model_s11_db,model_s21_db"
    );
    assert_eq!(lines.count(), 201);
}

#[test]
fn exit_codes_separate_usage_data_and_fit_failures() {
    // unknown flag value: usage, 1
    let output = run(&["fit", "--mode", "sideways", "--in", "x.s2p"]);
    assert_eq!(output.status.code(), Some(1));

    // unreadable input: data, 2
    let output = run(&["fit", "--mode", "reflection", "--in", "/nonexistent/a.s1p"]);
    assert_eq!(output.status.code(), Some(2));

    // malformed touchstone: data, 2
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.s1p");
    std::fs::write(&bad, "# GHz S MA R 50\n2.9 0.5\n").unwrap();
    let output = run(&["fit", "--mode", "reflection", "--in", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    // a trace with no interior minimum: no resonance to fit, 2
    let flat = dir.path().join("flat.s1p");
    let mut text = String::from("# GHz S MA R 50\n");
    for i in 0..50 {
        text.push_str(&format!("{} {} 0\n", 1.0 + 0.01 * i as f64, 1.0 - 0.001 * i as f64));
    }
    std::fs::write(&flat, &text).unwrap();
    let output = run(&["fit", "--mode", "reflection", "--in", flat.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    // help: 0 on stdout
    let output = run(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("synth"));
}

#[test]
fn pi_power_formats_watts_to_three_places() {
    let output = run(&["nv", "pi-power", "--tpi", "50ns", "--efficiency", "2230"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "0.049 W\n");
}

#[test]
fn design_report_has_both_output_shapes() {
    let output = run(&["design", "--z-resonator", "10.4"]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(json["by_strip_impedance"].is_object());
    assert!(json["by_supplied_impedance"].is_object());
    assert!(json["model_limits"].as_array().unwrap().len() >= 4);

    let output = run(&["design", "--z-resonator", "10.4", "--text"]);
    assert!(output.status.success());
    let table = stdout(&output);
    assert!(table.contains("transmission"));
    assert!(table.contains("reflection"));
    assert!(table.contains("pi-pulse power"));
}

#[test]
fn convert_chains_touchstone_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let s1p = dir.path().join("a.s1p");
    assert!(run(&[
        "synth",
        "--mode",
        "reflection",
        "--q0",
        "70",
        "--beta",
        "8.3",
        "--f0",
        "2.93GHz",
        "--start",
        "2GHz",
        "--stop",
        "4GHz",
        "--points",
        "51",
        "--out",
        s1p.to_str().unwrap(),
    ])
    .status
    .success());

    let csv = dir.path().join("a.csv");
    assert!(run(&[
        "convert",
        "--in",
        s1p.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("frequency_hz,s11_db\n"));

    let back = dir.path().join("b.s1p");
    assert!(run(&[
        "convert",
        "--in",
        csv.to_str().unwrap(),
        "--out",
        back.to_str().unwrap(),
        "--format",
        "ri",
        "--unit",
        "hz",
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&back).unwrap();
    assert!(text.starts_with("# HZ S RI R 50\n"));
    let (trace, _) = omegaloop::sparams::parse_touchstone(&text).unwrap();
    assert_eq!(trace.len(), 51);
}
