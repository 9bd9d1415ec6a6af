//! End-to-end checks of the command-line interface: exit codes, byte
//! determinism, and the sample -> diagnose round trip in both word
//! formats.

use std::path::PathBuf;
use std::process::Command;

use dyadic_spectra::cli;

fn run_in_process(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["dyadic-spectra".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scratch_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("dyadic-spectra-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dyadic-spectra");
    // Usage error: unknown subcommand.
    let status = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(status.status.code(), Some(64));
    assert!(!status.stderr.is_empty());

    // Domain violation: empty-set regime requested as a value.
    let status = Command::new(bin)
        .args(["solve", "--ps", "--alpha", "1.5"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));

    // Internal error: unreadable input file.
    let status = Command::new(bin)
        .args(["diagnose", "--word", "/nonexistent/no-such-file"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    // Success path through the real binary.
    let output = Command::new(bin)
        .args(["count", "--set", "a", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(String::from_utf8(output.stdout).unwrap().trim(), "10");
}

#[test]
fn spectrum_output_is_byte_deterministic() {
    let args = [
        "spectrum",
        "--family",
        "freq",
        "--alpha-grid",
        "0:0.4:0.2",
        "--theta-grid",
        "0:0.8:0.2",
        "--format",
        "json",
    ];
    let (code_a, out_a, _) = run_in_process(&args);
    let (code_b, out_b, _) = run_in_process(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(out_a, out_b);
    assert!(
        out_a.contains("empty-set"),
        "off-domain rows must be tagged"
    );
}

#[test]
fn sample_then_diagnose_round_trip() {
    let ascii_path = scratch_path("word.txt");
    let packed_path = scratch_path("word.bin");
    let ascii_str = ascii_path.to_str().unwrap();
    let packed_str = packed_path.to_str().unwrap();

    let (code, header, _) = run_in_process(&[
        "sample", "--alpha", "0.2", "--n", "65536", "--seed", "7", "--out", ascii_str,
    ]);
    assert_eq!(code, 0);
    assert!(
        header.contains("\"seed\":7"),
        "header must echo the seed: {header}"
    );

    let (code, _, _) = run_in_process(&[
        "sample", "--alpha", "0.2", "--n", "65536", "--seed", "7", "--format", "packed", "--out",
        packed_str,
    ]);
    assert_eq!(code, 0);

    let diagnose_ascii = [
        "diagnose",
        "--word",
        ascii_str,
        "--scale",
        "14",
        "--m",
        "3",
        "--alpha",
        "0.2",
        "--epsilon",
        "0.05",
    ];
    let (code, report_a1, _) = run_in_process(&diagnose_ascii);
    assert_eq!(code, 0);
    let (_, report_a2, _) = run_in_process(&diagnose_ascii);
    assert_eq!(report_a1, report_a2, "diagnose must be byte deterministic");

    let (code, report_packed, _) = run_in_process(&[
        "diagnose",
        "--word",
        packed_str,
        "--packed",
        "--scale",
        "14",
        "--m",
        "3",
        "--alpha",
        "0.2",
        "--epsilon",
        "0.05",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        report_a1, report_packed,
        "the two word formats must reproduce identical statistics"
    );

    let report: serde_json::Value = serde_json::from_str(&report_a1).unwrap();
    assert_eq!(report["word_length"], 65536);
    assert_eq!(report["xtable"]["relations_hold"], true);
    assert_eq!(report["pairfreq"]["pass"], true);

    std::fs::remove_file(&ascii_path).ok();
    std::fs::remove_file(&packed_path).ok();
}

#[test]
fn profile_windows_and_matrix_agree() {
    // The windowed count equals summing the printed matrix by hand.
    let (code, matrix_csv, _) = run_in_process(&["profile", "--n", "8", "--mode", "exact"]);
    assert_eq!(code, 0);
    let mut manual = 0u64;
    for line in matrix_csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let ones: u32 = fields[0].parse().unwrap();
        let pairs: u32 = fields[1].parse().unwrap();
        if (2..=5).contains(&ones) && pairs <= 1 {
            manual += fields[2].parse::<u64>().unwrap();
        }
    }
    let (code, windowed, _) = run_in_process(&[
        "profile",
        "--n",
        "8",
        "--ones-window",
        "2:5",
        "--pairs-window",
        "0:1",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&windowed).unwrap();
    assert_eq!(value["count"], manual.to_string());
}

#[test]
fn estimate_matches_formula_fields() {
    let (code, out, _) = run_in_process(&[
        "estimate", "--theta", "0.4", "--alpha", "0.1", "--n", "1048576", "--seed", "3",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let digit = value["digit_frequency"].as_f64().unwrap();
    let pair = value["pair_frequency"].as_f64().unwrap();
    let entropy = value["empirical_local_entropy"].as_f64().unwrap();
    let expected = value["expected"]["local_entropy"].as_f64().unwrap();
    assert!((digit - 0.4).abs() < 0.01);
    assert!((pair - 0.1).abs() < 0.01);
    assert!((entropy - expected).abs() < 0.02);
    assert_eq!(value["seed"], 3);
}

#[test]
fn params_file_selects_measure() {
    let params_path = scratch_path("params.json");
    std::fs::write(
        &params_path,
        r#"{"p0":0.5,"p1":0.5,"p00":0.5,"p01":0.5,"p10":0.5,"p11":0.5}"#,
    )
    .unwrap();
    let (code, out, _) = run_in_process(&[
        "estimate",
        "--params",
        params_path.to_str().unwrap(),
        "--n",
        "4096",
        "--seed",
        "11",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["expected"]["digit_frequency"], 0.5);
    std::fs::remove_file(&params_path).ok();

    // Invalid parameter files are domain errors, not crashes.
    let bad_path = scratch_path("bad-params.json");
    std::fs::write(
        &bad_path,
        r#"{"p0":0.9,"p1":0.5,"p00":0.5,"p01":0.5,"p10":0.5,"p11":0.5}"#,
    )
    .unwrap();
    let (code, _, err) = run_in_process(&[
        "estimate",
        "--params",
        bad_path.to_str().unwrap(),
        "--n",
        "64",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("sum"));
    std::fs::remove_file(&bad_path).ok();
}
