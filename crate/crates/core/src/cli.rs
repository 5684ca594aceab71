//! `immocz` command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 reference-vector mismatch,
//! 3 I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{ReceivedSignal, Scheme};
use crate::codebook::{build_codebook_set, SystemParams, ZeroRole, DEFAULT_RADIUS};
use crate::config::{parse_config, parse_detector, preset, PRESET_NAMES};
use crate::detection::{decode, DetectionResult, Detector};
use crate::fmt::format_significant;
use crate::golden;
use crate::simulator::{run_sweep_observed, spectral_efficiency, BerCurve, CSV_HEADER};
use crate::Complex64;

#[derive(Debug, Parser)]
#[command(name = "immocz", version, about = "IM-MOCZ link simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run BER sweeps from a config file or preset and write a CSV.
    Simulate(SimulateArgs),
    /// Recompute the reference scenario and compare with tabulated values.
    Vectors,
    /// Dump every codebook zero.
    Codebook(CodebookArgs),
    /// Decode one received signal file.
    Decode(DecodeArgs),
    /// Spectral efficiency of IM-MOCZ against MOCZ.
    SeTable(SeTableArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Config file (key = value).
    #[arg(long, required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in preset: fig3-K8, fig3-K6, fig3-K4, fig4-K18, fig4-K16, fig4-K14.
    #[arg(long, conflicts_with = "config")]
    pub preset: Option<String>,
    /// Trials at every Eb/N0 point.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Also write a matplotlib script next to the CSV.
    #[arg(long)]
    pub plot: bool,
    #[arg(long, default_value = "sweep.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CodebookArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// One complex sample per line: `re im`.
    #[arg(long)]
    pub file: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub lch: usize,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub r: f64,
    #[arg(long, default_value = "rfmd", value_parser = parse_detector_arg)]
    pub detector: Detector,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SeTableArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lch: usize,
    /// Comma-separated K values.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub k: Vec<usize>,
}

fn parse_detector_arg(s: &str) -> Result<Detector, String> {
    parse_detector(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    GoldenMismatch(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::GoldenMismatch(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("writing output: {e}"))
}

pub fn run(cli: Cli, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(&args, out, log),
        Command::Vectors => cmd_vectors(out),
        Command::Codebook(args) => cmd_codebook(&args, out),
        Command::Decode(args) => cmd_decode(&args, out),
        Command::SeTable(args) => cmd_se_table(&args, out),
    }
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    let text = match (&args.config, &args.preset) {
        (_, Some(name)) => preset(name).ok_or_else(|| {
            CliError::Validation(format!(
                "unknown preset '{name}', expected one of {}",
                PRESET_NAMES.join(", ")
            ))
        })?,
        (Some(path), None) => fs::read_to_string(path).map_err(|e| io_err(path, e))?,
        (None, None) => return Err(CliError::Validation("--config or --preset is required".into())),
    };
    let plan = parse_config(&text)?;
    let mut configs = plan.configs()?;
    for cfg in &mut configs {
        if let Some(t) = args.trials {
            *cfg = cfg.clone().with_trials(t);
        }
        if let Some(s) = args.seed {
            cfg.master_seed = s;
        }
        if let Some(w) = args.workers {
            cfg.workers = w;
        }
        cfg.validate()?;
    }

    let mut curves: Vec<BerCurve> = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let p = cfg.effective_params();
        let label = format!("{} {} N={} K={}", cfg.scheme.as_str(), cfg.detector, p.n(), p.k());
        let curve = run_sweep_observed(cfg, |pt| {
            let _ = writeln!(
                log,
                "[{label}] Eb/N0 {} dB: {} trials, BER {}",
                format_significant(pt.ebn0_db, 6),
                pt.trials,
                format_significant(pt.ber(), 4)
            );
        })?;
        curves.push(curve);
    }

    let mut csv = format!("{CSV_HEADER}\n");
    for c in &curves {
        csv.push_str(&c.csv_rows());
    }
    write_atomically(&args.out, &csv)?;
    writeln!(out, "wrote {}", args.out.display()).map_err(out_err)?;
    if args.plot {
        let script = plot_script_path(&args.out);
        write_atomically(&script, &plot_script(&args.out))?;
        writeln!(out, "wrote {}", script.display()).map_err(out_err)?;
    }
    let invalid: Vec<String> = curves
        .iter()
        .filter(|c| !c.is_valid())
        .map(|c| format!("{} {}", c.scheme.as_str(), c.detector))
        .collect();
    if !invalid.is_empty() {
        return Err(CliError::Validation(format!(
            "root-finding failures exceeded the allowed rate in: {}",
            invalid.join("; ")
        )));
    }
    Ok(())
}

/// Writes `contents` to a sibling temporary file and renames it into place.
fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

pub fn plot_script_path(csv: &Path) -> PathBuf {
    csv.with_extension("plot.py")
}

/// Matplotlib script plotting every scheme/detector curve of `csv` on a log axis.
pub fn plot_script(csv: &Path) -> String {
    let name = csv
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep.csv".into());
    format!(
        r#"#!/usr/bin/env python3
# BER vs Eb/N0 from {name}
import csv, os, sys
from collections import defaultdict
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "{name}")
curves = defaultdict(list)
with open(path) as f:
    for row in csv.DictReader(f):
        key = "{{}} {{}} (N={{}}, K={{}})".format(row["scheme"], row["detector"], row["N"], row["K"])
        ber = float(row["ber"])
        if ber > 0:
            curves[key].append((float(row["ebn0_db"]), ber))
for key, pts in curves.items():
    xs, ys = zip(*sorted(pts))
    plt.semilogy(xs, ys, marker="o", label=key)
plt.xlabel("Eb/N0 (dB)")
plt.ylabel("BER")
plt.grid(True, which="both", alpha=0.3)
plt.legend()
plt.savefig(os.path.splitext(path)[0] + ".png", dpi=150)
"#
    )
}

pub fn cmd_vectors(out: &mut dyn Write) -> Result<(), CliError> {
    let report = golden::check(&golden::received_zeros())?;
    for c in &report.checks {
        writeln!(
            out,
            "{} {:<24} expected {:<12} computed {:<12} delta {:.2e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            c.computed,
            c.delta
        )
        .map_err(out_err)?;
    }
    let set = golden::codebook_set();
    let decoded = crate::detection::decide(&report.rfmd, &set, &mut ChaCha8Rng::seed_from_u64(0))?;
    writeln!(
        out,
        "max |dP_RFMD| = {:.2e}, max |dP_DiZeT| = {:.2e}, decoded message {}",
        report.max_delta("P_RFMD"),
        report.max_delta("P_DiZeT"),
        decoded.message
    )
    .map_err(out_err)?;
    if report.passed() {
        writeln!(out, "PASS").map_err(out_err)?;
        Ok(())
    } else {
        let failing: Vec<String> = report
            .failures()
            .map(|c| format!("{} (delta {:.2e})", c.name, c.delta))
            .collect();
        writeln!(out, "FAIL").map_err(out_err)?;
        Err(CliError::GoldenMismatch(format!(
            "reference mismatch in: {}",
            failing.join(", ")
        )))
    }
}

/// `book_index,sector,role,re,im` lines, 16 significant digits.
pub fn codebook_dump(params: SystemParams) -> String {
    let set = build_codebook_set(params);
    let mut s = String::new();
    for book in &set.books {
        for (k, pair) in book.pairs.iter().enumerate() {
            for role in [ZeroRole::Outer, ZeroRole::Inner] {
                let z = pair.member(role);
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    book.index,
                    k + 1,
                    role,
                    format_significant(z.re, 16),
                    format_significant(z.im, 16)
                ));
            }
        }
    }
    s
}

pub fn cmd_codebook(args: &CodebookArgs, out: &mut dyn Write) -> Result<(), CliError> {
    // The dump does not depend on the channel length.
    let params = SystemParams::new(args.n, args.k, 1, args.r)?;
    out.write_all(codebook_dump(params).as_bytes()).map_err(out_err)
}

/// Text form of a signal, one `re im` pair per line.
pub fn format_signal(samples: &[Complex64]) -> String {
    samples
        .iter()
        .map(|s| format!("{} {}\n", format_significant(s.re, 17), format_significant(s.im, 17)))
        .collect()
}

/// Parses a signal file expected to hold `expected` samples. Blank lines and
/// `#` comments are skipped; errors name the offending line.
pub fn parse_signal(text: &str, expected: usize) -> Result<ReceivedSignal, CliError> {
    let mut samples = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if samples.len() == expected {
            return Err(CliError::Validation(format!(
                "line {lineno}: unexpected extra sample, expected K + L_ch = {expected} samples"
            )));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed = match fields[..] {
            [re, im] => re.parse::<f64>().ok().zip(im.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((re, im)) if re.is_finite() && im.is_finite() => samples.push(Complex64::new(re, im)),
            _ => {
                return Err(CliError::Validation(format!(
                    "line {lineno}: expected two finite numbers 're im', got '{line}'"
                )))
            }
        }
    }
    if samples.len() < expected {
        let line = if samples.is_empty() { 1 } else { last_line + 1 };
        return Err(CliError::Validation(format!(
            "line {line}: expected K + L_ch = {expected} samples, found {}",
            samples.len()
        )));
    }
    Ok(ReceivedSignal { samples })
}

pub fn format_detection(result: &DetectionResult, detector: Detector) -> String {
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    format!(
        "detector: {detector}\nchosen_index: {}\nvotes: {}\nper_sector_winners: {}\nmessage: {}\ntie: {}\n",
        result.chosen_index,
        join(&result.votes),
        join(&result.per_sector_winners),
        result.message,
        result.tie_occurred
    )
}

pub fn cmd_decode(args: &DecodeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let params = SystemParams::new(args.n, args.k, args.lch, args.r)?;
    let text = fs::read_to_string(&args.file).map_err(|e| io_err(&args.file, e))?;
    let y = parse_signal(&text, params.received_len())?;
    let set = build_codebook_set(params);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let result = decode(&y, &set, args.detector, &mut rng)?;
    out.write_all(format_detection(&result, args.detector).as_bytes())
        .map_err(out_err)
}

pub fn cmd_se_table(args: &SeTableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.k.is_empty() {
        return Err(CliError::Validation("--k needs at least one value".into()));
    }
    let mut s = format!("# N={} L_ch={}\nK,se_mocz,se_im_mocz,gain_percent\n", args.n, args.lch);
    for &k in &args.k {
        let p = SystemParams::new(args.n, k, args.lch, DEFAULT_RADIUS)?;
        let mocz = spectral_efficiency(&p, Scheme::Mocz);
        let im = spectral_efficiency(&p, Scheme::ImMocz);
        s.push_str(&format!("{k},{mocz:.4},{im:.4},{:.2}\n", (im / mocz - 1.0) * 100.0));
    }
    out.write_all(s.as_bytes()).map_err(out_err)
}
