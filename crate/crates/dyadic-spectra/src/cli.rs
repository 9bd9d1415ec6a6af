//! Command-line front end.
//!
//! Subcommands map one-to-one onto the library surface:
//!
//! - `spectrum`: tabulate a spectrum family over grids (CSV or JSON);
//! - `solve`: the named roots (base set, level-set system, stationary
//!   theta) as JSON;
//! - `count`: exact constrained-set counts or the growth rate;
//! - `profile`: profile matrices and windowed level-set counts;
//! - `sample`: draw a word from a telescopic measure (seed required);
//! - `estimate`: empirical frequencies and local entropy of a sampled
//!   word against their formula values;
//! - `diagnose`: membership/normality checks on a word file.
//!
//! Exit codes: 0 success, 2 domain violation (e.g. an empty-set regime
//! requested as a value), 1 internal error, 64 usage error. Output goes
//! to stdout, logs to stderr. All randomness is seeded; identical
//! configurations produce byte-identical output.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::counting::{self, CountMode, LevelSetCount};
use crate::diagnostics::{self, BlockMode};
use crate::measure::MeasureParams;
use crate::spectra::{self, GridSpec, SpectrumFamily};
use crate::word::Word;

/// Exit code for usage errors (bad flags, unknown command).
pub const EXIT_USAGE: i32 = 64;
/// Exit code for domain violations.
pub const EXIT_DOMAIN: i32 = 2;
/// Exit code for internal errors (I/O, serialization).
pub const EXIT_INTERNAL: i32 = 1;

pub use crate::counting::THREADS_ENV_VAR;

#[derive(Debug, Parser)]
#[command(
    name = "dyadic-spectra",
    about = "Entropy spectra of dyadic pair-frequency level sets",
    version,
    disable_help_subcommand = true
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Pair-frequency level set (solver-backed).
    Level,
    /// Normal-sequence slice.
    Normal,
    /// Digit-frequency slice (requires theta).
    Freq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WordFormatArg {
    Ascii,
    Packed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a spectrum family over parameter grids.
    Spectrum {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Alpha grid as start:stop:step (inclusive) or a single value.
        #[arg(long = "alpha-grid")]
        alpha_grid: String,
        /// Theta grid or single value (frequency family only).
        #[arg(long = "theta-grid")]
        theta_grid: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(long, value_enum, default_value = "nats")]
        units: Units,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Solve the named root systems.
    Solve {
        /// Base-set growth root of p^2 = (1-p)^3.
        #[arg(long, conflicts_with_all = ["ps", "corollary"])]
        kps: bool,
        /// Level-set system at --alpha.
        #[arg(long, conflicts_with = "corollary")]
        ps: bool,
        /// Stationary theta of the frequency spectrum at --alpha.
        #[arg(long)]
        corollary: bool,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value = "nats")]
        units: Units,
    },
    /// Exact counts of the constrained sets, or their growth rate.
    Count {
        #[arg(long, value_enum)]
        set: SetArg,
        #[arg(long)]
        n: u64,
        /// Print (1/n) ln count instead of the exact integer (set A only).
        #[arg(long)]
        rate: bool,
    },
    /// Profile matrices and windowed level-set counts.
    Profile {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Inclusive ones window lo:hi; with --pairs-window, prints the
        /// level-set count instead of the matrix.
        #[arg(long = "ones-window")]
        ones_window: Option<String>,
        /// Inclusive pairs window lo:hi.
        #[arg(long = "pairs-window")]
        pairs_window: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        /// Write the matrix to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a word from a telescopic measure.
    Sample {
        #[command(flatten)]
        measure: MeasureSelector,
        #[arg(long)]
        n: usize,
        /// Seed for the ChaCha streams (required; echoed in the header).
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "ascii")]
        format: WordFormatArg,
        /// Output file; required for packed output, optional for ASCII.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical statistics of a sampled word against formula values.
    Estimate {
        #[command(flatten)]
        measure: MeasureSelector,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "nats")]
        units: Units,
    },
    /// Normality and membership diagnostics on a word file.
    Diagnose {
        /// Word file (ASCII '0'/'1', or packed with --packed).
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        packed: bool,
        /// Comma-separated checks: blocks,normal,pairfreq,xtable.
        #[arg(long, default_value = "blocks,normal,pairfreq,xtable")]
        checks: String,
        /// Base scale N for the membership checks.
        #[arg(long = "scale", default_value_t = 8)]
        n_exp: u32,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Target pair frequency for the pairfreq check.
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        /// Block order for the blocks check.
        #[arg(long = "block-order", default_value_t = 3)]
        block_order: u32,
        /// Restrict to the arithmetic subsequence offset + k * stride
        /// before running checks.
        #[arg(long, default_value_t = 0)]
        offset: usize,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Count disjoint blocks instead of sliding windows.
        #[arg(long)]
        disjoint_blocks: bool,
    },
}

/// Ways to pick a measure: --alpha, --theta + --alpha, or --params file.
#[derive(Debug, Args)]
pub struct MeasureSelector {
    /// Pair frequency (normal-slice family when used alone).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Digit frequency (frequency-slice family; needs --alpha too).
    #[arg(long)]
    pub theta: Option<f64>,
    /// JSON file with the six probabilities.
    #[arg(long, conflicts_with_all = ["alpha", "theta"])]
    pub params: Option<PathBuf>,
}

enum CliError {
    Domain(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Internal(m) => m,
        }
    }
}

fn domain(err: impl Display) -> CliError {
    CliError::Domain(err.to_string())
}

fn internal(err: impl Display) -> CliError {
    CliError::Internal(err.to_string())
}

impl MeasureSelector {
    fn resolve(&self) -> Result<MeasureParams, CliError> {
        match (self.theta, self.alpha, &self.params) {
            (None, None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(internal)?;
                serde_json::from_str(&text).map_err(domain)
            }
            (Some(theta), Some(alpha), None) => {
                MeasureParams::from_theta_alpha(theta, alpha).map_err(domain)
            }
            (None, Some(alpha), None) => MeasureParams::from_alpha(alpha).map_err(domain),
            _ => Err(CliError::Domain(
                "select a measure with --alpha, --theta with --alpha, or --params".into(),
            )),
        }
    }

    fn describe(&self, params: &MeasureParams) -> serde_json::Value {
        let mut desc = serde_json::to_value(params).expect("params serialize");
        if let Some(alpha) = self.alpha {
            desc["alpha"] = json!(alpha);
        }
        if let Some(theta) = self.theta {
            desc["theta"] = json!(theta);
        }
        desc
    }
}

/// Entry point used by the binary: parses real argv, honors the worker
/// cap, writes to the process streams.
pub fn run_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    run(&args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Parse `argv` and run. Usage errors print clap's message and return 64;
/// domain violations return 2; internal errors return 1.
pub fn run<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let config = match RunConfig::try_parse_from(argv) {
        Ok(config) => config,
        Err(parse_err) => {
            // Help and version requests are successful output, not errors.
            use clap::error::ErrorKind;
            let rendered = parse_err.render();
            if matches!(
                parse_err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = write!(out, "{rendered}");
                return 0;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_USAGE;
        }
    };
    match execute(&config.command, out) {
        Ok(()) => 0,
        Err(cli_err) => {
            let _ = writeln!(err, "error: {}", cli_err.message());
            cli_err.code()
        }
    }
}

fn execute<W: Write>(command: &Command, out: &mut W) -> Result<(), CliError> {
    match command {
        Command::Spectrum {
            family,
            alpha_grid,
            theta_grid,
            format,
            units,
            tol,
        } => spectrum_command(
            *family,
            alpha_grid,
            theta_grid.as_deref(),
            *format,
            *units,
            *tol,
            out,
        ),
        Command::Solve {
            kps,
            ps,
            corollary,
            alpha,
            tol,
            units,
        } => solve_command(*kps, *ps, *corollary, *alpha, *tol, *units, out),
        Command::Count { set, n, rate } => count_command(*set, *n, *rate, out),
        Command::Profile {
            n,
            mode,
            ones_window,
            pairs_window,
            format,
            out: path,
        } => profile_command(
            *n,
            *mode,
            ones_window.as_deref(),
            pairs_window.as_deref(),
            *format,
            path.as_deref(),
            out,
        ),
        Command::Sample {
            measure,
            n,
            seed,
            format,
            out: path,
        } => sample_command(measure, *n, *seed, *format, path.as_deref(), out),
        Command::Estimate {
            measure,
            n,
            seed,
            units,
        } => estimate_command(measure, *n, *seed, *units, out),
        Command::Diagnose {
            word,
            packed,
            checks,
            n_exp,
            m,
            epsilon,
            alpha,
            block_order,
            offset,
            stride,
            disjoint_blocks,
        } => diagnose_command(
            word,
            *packed,
            checks,
            *n_exp,
            *m,
            *epsilon,
            *alpha,
            *block_order,
            *offset,
            *stride,
            *disjoint_blocks,
            out,
        ),
    }
}

fn parse_grid(text: &str) -> Result<GridSpec, CliError> {
    text.parse::<GridSpec>().map_err(CliError::Domain)
}

fn spectrum_command<W: Write>(
    family: FamilyArg,
    alpha_grid: &str,
    theta_grid: Option<&str>,
    format: OutputFormat,
    _units: Units,
    tol: f64,
    out: &mut W,
) -> Result<(), CliError> {
    let alpha = parse_grid(alpha_grid)?;
    let theta = theta_grid.map(parse_grid).transpose()?;
    let family = match family {
        FamilyArg::Level => SpectrumFamily::LevelSet,
        FamilyArg::Normal => SpectrumFamily::Normal,
        FamilyArg::Freq => SpectrumFamily::Frequency,
    };
    let rows = spectra::spectrum_scan(family, &alpha, theta.as_ref(), tol).map_err(domain)?;
    match format {
        OutputFormat::Csv => spectra::write_scan_csv(&rows, out).map_err(internal)?,
        OutputFormat::Json => {
            let text = serde_json::to_string_pretty(&rows).map_err(internal)?;
            writeln!(out, "{text}").map_err(internal)?;
        }
    }
    Ok(())
}

fn solve_command<W: Write>(
    kps: bool,
    ps: bool,
    corollary: bool,
    alpha: f64,
    tol: f64,
    units: Units,
    out: &mut W,
) -> Result<(), CliError> {
    let report = if kps {
        let sol = spectra::solve_kps(tol).map_err(domain)?;
        json!({
            "solver": "kps",
            "p": sol.p,
            "entropy": units.convert(sol.entropy_nats),
            "units": units.label(),
            "residual": sol.residual,
        })
    } else if ps {
        let roots = spectra::solve_ps(alpha, tol).map_err(domain)?;
        let point = spectra::h_a_alpha_with_tol(alpha, tol).map_err(domain)?;
        let entropy = point
            .entropy_nats
            .ok_or_else(|| CliError::Domain(format!("level set empty at alpha = {alpha}")))?;
        json!({
            "solver": "ps",
            "alpha": alpha,
            "p": roots.p,
            "q": roots.q,
            "entropy": units.convert(entropy),
            "units": units.label(),
            "residual_growth": roots.residual_growth,
            "residual_frequency": roots.residual_frequency,
            "regime": point.regime.as_str(),
        })
    } else if corollary {
        let root = spectra::solve_corollary_theta(alpha, tol).map_err(domain)?;
        let at_star = spectra::h_freq(root.theta, alpha).map_err(domain)?;
        let mut report = json!({
            "solver": "corollary",
            "alpha": alpha,
            "theta": root.theta,
            "entropy": at_star.entropy_nats.map(|h| units.convert(h)),
            "units": units.label(),
            "derivative_residual": root.derivative_residual,
            "relation_residual": root.relation_residual,
        });
        if alpha == 0.0 {
            report["theta_closed_form"] = json!(spectra::theta_star_closed_form());
        }
        report
    } else {
        return Err(CliError::Domain(
            "pick a solver: --kps, --ps, or --corollary".into(),
        ));
    };
    let text = serde_json::to_string_pretty(&report).map_err(internal)?;
    writeln!(out, "{text}").map_err(internal)?;
    Ok(())
}

fn count_command<W: Write>(set: SetArg, n: u64, rate: bool, out: &mut W) -> Result<(), CliError> {
    if rate {
        if set != SetArg::A {
            return Err(CliError::Domain("--rate applies to set A only".into()));
        }
        let rate = counting::counting_growth_rate(n).map_err(domain)?;
        writeln!(out, "{rate}").map_err(internal)?;
        return Ok(());
    }
    let count = match set {
        SetArg::A => counting::count_a(n).map_err(domain)?,
        SetArg::B => counting::count_b(n).map_err(domain)?,
    };
    writeln!(out, "{count}").map_err(internal)?;
    Ok(())
}

fn parse_window(text: &str) -> Result<(u32, u32), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(CliError::Domain(format!("window {text:?} must be lo:hi")));
    }
    let lo = parts[0].trim().parse::<u32>().map_err(domain)?;
    let hi = parts[1].trim().parse::<u32>().map_err(domain)?;
    Ok((lo, hi))
}

fn profile_command<W: Write>(
    n: u32,
    mode: ModeArg,
    ones_window: Option<&str>,
    pairs_window: Option<&str>,
    format: OutputFormat,
    path: Option<&std::path::Path>,
    out: &mut W,
) -> Result<(), CliError> {
    let mode = match mode {
        ModeArg::Exact => CountMode::Exact,
        ModeArg::Log => CountMode::LogSpace,
    };
    if ones_window.is_some() || pairs_window.is_some() {
        let ones = ones_window.map(parse_window).transpose()?.unwrap_or((0, n));
        let pairs = pairs_window
            .map(parse_window)
            .transpose()?
            .unwrap_or((0, n / 2));
        let count = counting::level_set_count(n, ones, pairs, mode).map_err(domain)?;
        let report = match &count {
            LevelSetCount::Exact(c) => json!({
                "n": n,
                "ones_window": [ones.0, ones.1],
                "pairs_window": [pairs.0, pairs.1],
                "count": c.to_string(),
                "log_count": count.log_value(),
                "rate_nats": count.log_value() / f64::from(n),
            }),
            LevelSetCount::Log(l) => json!({
                "n": n,
                "ones_window": [ones.0, ones.1],
                "pairs_window": [pairs.0, pairs.1],
                "log_count": l,
                "rate_nats": l / f64::from(n),
            }),
        };
        let text = serde_json::to_string_pretty(&report).map_err(internal)?;
        writeln!(out, "{text}").map_err(internal)?;
        return Ok(());
    }

    let matrix = counting::profile_matrix(n, mode).map_err(domain)?;
    let mut rendered: Vec<u8> = Vec::new();
    match format {
        OutputFormat::Csv => matrix.write_csv(&mut rendered).map_err(internal)?,
        OutputFormat::Json => {
            let text = serde_json::to_string_pretty(&matrix.to_json()).map_err(internal)?;
            writeln!(rendered, "{text}").map_err(internal)?;
        }
    }
    match path {
        Some(file) => fs::write(file, rendered).map_err(internal)?,
        None => out.write_all(&rendered).map_err(internal)?,
    }
    Ok(())
}

fn sample_command<W: Write>(
    selector: &MeasureSelector,
    n: usize,
    seed: u64,
    format: WordFormatArg,
    path: Option<&std::path::Path>,
    out: &mut W,
) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Domain("sample length must be >= 1".into()));
    }
    let params = selector.resolve()?;
    let word = params.sample(n, seed);
    let header = json!({
        "command": "sample",
        "n": n,
        "seed": seed,
        "format": match format { WordFormatArg::Ascii => "ascii", WordFormatArg::Packed => "packed" },
        "measure": selector.describe(&params),
    });
    writeln!(out, "{header}").map_err(internal)?;
    match (format, path) {
        (WordFormatArg::Ascii, None) => {
            writeln!(out, "{}", word.to_ascii()).map_err(internal)?;
        }
        (WordFormatArg::Ascii, Some(file)) => {
            fs::write(file, word.to_ascii()).map_err(internal)?;
        }
        (WordFormatArg::Packed, Some(file)) => {
            let mut bytes = Vec::new();
            word.write_packed(&mut bytes).map_err(internal)?;
            fs::write(file, bytes).map_err(internal)?;
        }
        (WordFormatArg::Packed, None) => {
            return Err(CliError::Domain("packed output requires --out FILE".into()));
        }
    }
    Ok(())
}

fn estimate_command<W: Write>(
    selector: &MeasureSelector,
    n: usize,
    seed: u64,
    units: Units,
    out: &mut W,
) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Domain("sample length must be >= 1".into()));
    }
    let params = selector.resolve()?;
    let word = params.sample(n, seed);
    let digit_freq = word.count_ones() as f64 / n as f64;
    let pair_freq = word.pair_count() as f64 / (n / 2).max(1) as f64;
    let empirical = params.empirical_local_entropy(&word).map_err(domain)?;
    let report = json!({
        "command": "estimate",
        "n": n,
        "seed": seed,
        "units": units.label(),
        "measure": selector.describe(&params),
        "digit_frequency": digit_freq,
        "pair_frequency": pair_freq,
        "empirical_local_entropy": units.convert(empirical),
        "expected": {
            "digit_frequency": params.xi().value(),
            "pair_frequency": params.expected_pair_freq(),
            "local_entropy": units.convert(params.local_entropy()),
        },
    });
    let text = serde_json::to_string_pretty(&report).map_err(internal)?;
    writeln!(out, "{text}").map_err(internal)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn diagnose_command<W: Write>(
    word_path: &std::path::Path,
    packed: bool,
    checks: &str,
    n_exp: u32,
    m: u32,
    epsilon: f64,
    alpha: f64,
    block_order: u32,
    offset: usize,
    stride: usize,
    disjoint_blocks: bool,
    out: &mut W,
) -> Result<(), CliError> {
    let word = if packed {
        let bytes = fs::read(word_path).map_err(internal)?;
        Word::read_packed(bytes.as_slice()).map_err(domain)?
    } else {
        let text = fs::read_to_string(word_path).map_err(internal)?;
        Word::parse_ascii(&text).map_err(domain)?
    };
    let word = if offset == 0 && stride == 1 {
        word
    } else {
        diagnostics::arithmetic_subsequence(&word, offset, stride).map_err(domain)?
    };
    if word.is_empty() {
        return Err(CliError::Domain("word is empty after restriction".into()));
    }

    let mut report = json!({
        "command": "diagnose",
        "word_length": word.len(),
        "offset": offset,
        "stride": stride,
    });
    for check in checks.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match check {
            "blocks" => {
                let mode = if disjoint_blocks {
                    BlockMode::Disjoint
                } else {
                    BlockMode::Overlapping
                };
                let blocks = diagnostics::block_frequencies_with_mode(&word, block_order, mode)
                    .map_err(domain)?;
                report["blocks"] = serde_json::to_value(&blocks).map_err(internal)?;
            }
            "normal" => {
                let normal =
                    diagnostics::membership_normal(&word, n_exp, m, epsilon).map_err(domain)?;
                report["normal"] = serde_json::to_value(&normal).map_err(internal)?;
            }
            "pairfreq" => {
                let pairs = diagnostics::membership_pair_freq(&word, alpha, n_exp, epsilon)
                    .map_err(domain)?;
                report["pairfreq"] = serde_json::to_value(&pairs).map_err(internal)?;
            }
            "xtable" => {
                let table = diagnostics::x_table(&word, m).map_err(domain)?;
                let relations = table.relations();
                let gaps = diagnostics::nnorm_gap(&table, epsilon);
                report["xtable"] = json!({
                    "n_exp": table.n_exp(),
                    "m": table.m(),
                    "relations_hold": table.relations_hold(),
                    "relations_checked": relations.len(),
                    "nnorm": serde_json::to_value(&gaps).map_err(internal)?,
                });
            }
            other => {
                return Err(CliError::Domain(format!(
                    "unknown check {other:?}; expected blocks, normal, pairfreq, xtable"
                )));
            }
        }
    }
    let text = serde_json::to_string_pretty(&report).map_err(internal)?;
    writeln!(out, "{text}").map_err(internal)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["dyadic-spectra".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_command_is_usage_error() {
        let (code, _, err) = run_to_string(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = run_to_string(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("spectrum"));
    }

    #[test]
    fn solve_kps_json() {
        let (code, out, _) = run_to_string(&["solve", "--kps"]);
        assert_eq!(code, 0);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((value["p"].as_f64().unwrap() - 0.4302).abs() < 1e-3);
        assert!((value["entropy"].as_f64().unwrap() - 0.562399).abs() < 1e-5);
    }

    #[test]
    fn count_a_small() {
        let (code, out, _) = run_to_string(&["count", "--set", "a", "--n", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "10");
    }

    #[test]
    fn spectrum_bits_row() {
        let (code, out, _) = run_to_string(&[
            "spectrum",
            "--family",
            "normal",
            "--alpha-grid",
            "0:0.5:0.05",
            "--units",
            "bits",
        ]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "alpha,theta,entropy_nats,entropy_bits,regime,residual"
        );
        // Row at alpha = 0: entropy_bits column must be exactly 0.5.
        let first = lines.next().unwrap();
        let fields: Vec<&str> = first.split(',').collect();
        assert_eq!(fields[0], "0");
        assert!((fields[3].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(out.lines().count(), 12);
    }

    #[test]
    fn empty_set_value_request_is_domain_error() {
        let (code, _, err) =
            run_to_string(&["estimate", "--alpha", "0.7", "--n", "64", "--seed", "1"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("empty"));
    }

    #[test]
    fn determinism_byte_identical() {
        let args = [
            "estimate", "--theta", "0.4", "--alpha", "0.1", "--n", "4096", "--seed", "9",
        ];
        let (code_a, out_a, _) = run_to_string(&args);
        let (code_b, out_b, _) = run_to_string(&args);
        assert_eq!(code_a, 0);
        assert_eq!(code_a, code_b);
        assert_eq!(out_a, out_b);
    }

    #[test]
    fn missing_seed_is_usage_error() {
        let (code, _, _) = run_to_string(&["sample", "--alpha", "0.2", "--n", "16"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
