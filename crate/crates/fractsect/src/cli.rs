//! Command-line orchestration: batch analysis over sector files,
//! synthetic-series generation, and the validation suite.
//!
//! Machine-readable results go to files (`report.txt`, `report.json`,
//! per-sector plot TSVs), progress goes to stderr, and only `validate`
//! prints its pass/fail table to stdout. Every artifact embeds the FNV-1a
//! hash of the exact run configuration, and all outputs are
//! byte-deterministic for a given configuration, so re-running a
//! configuration overwrites its artifacts with identical bytes.
//!
//! Exit codes: 0 success, 1 total failure (no sector succeeded, or a
//! validation criterion failed), 2 configuration error.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::emd::EemdConfig;
use crate::mfdfa::{self, Analysis, AnalysisParams, Detrender, HurstCurve, QGrid};
use crate::reference;
use crate::series::{self, SectorMeta, Series};
use crate::spectrum::{self, SpectrumReport};
use crate::stats;
use crate::synth::{self, CascadeSpec, FgnSpec};
use crate::validate::{self, Mode};

/// Environment variable overriding the built-in default master seed.
/// An explicit seed (flag or config file) still wins over it.
pub const ENV_SEED: &str = "FRACTSECT_SEED";

/// Full parameter set of one `analyze` run. Field names double as the
/// keys of the flat `key=value` config file (`input` may repeat).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunConfig {
    pub inputs: Vec<String>,
    pub date_column: String,
    pub value_column: String,
    pub s_min: usize,
    pub crossover: usize,
    pub s_max: usize,
    pub per_regime: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    /// One of `eemd-window`, `eemd-global`, or `poly:K`.
    pub detrend: String,
    /// Ensemble size M for the eemd detrend modes. 16 is the tractable
    /// per-window default; pass 100 for the full-size ensemble.
    pub ensemble: usize,
    /// Added-noise amplitude as a fraction of the signal's deviation.
    pub noise_ratio: f64,
    pub seed: u64,
    pub out_dir: String,
    pub emit_table: bool,
    pub emit_json: bool,
    pub emit_plotdata: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            date_column: "Date".into(),
            value_column: "Close".into(),
            s_min: 10,
            crossover: 200,
            s_max: 1000,
            per_regime: 20,
            q_min: -10.0,
            q_max: 10.0,
            q_step: 0.5,
            detrend: "eemd-window".into(),
            ensemble: 16,
            noise_ratio: 0.2,
            seed: validate::DEFAULT_SEED,
            out_dir: "out".into(),
            emit_table: true,
            emit_json: true,
            emit_plotdata: true,
        }
    }
}

impl RunConfig {
    /// FNV-1a 64 hash of the canonical JSON form, as fixed-width hex.
    pub fn hash_hex(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        format!("{:016x}", stats::fnv1a64(json.as_bytes()))
    }
}

/// Analysis result for one input file, as embedded in `report.json`.
/// Echoes the exact configuration it was produced under, so a sector
/// entry extracted from a report stays reproducible on its own.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SectorReport {
    pub label: String,
    /// Sector identity when the label matches a known sector symbol.
    pub meta: Option<SectorMeta>,
    pub config: RunConfig,
    pub short: Option<SpectrumReport>,
    pub long: Option<SpectrumReport>,
    pub warnings: Vec<String>,
}

/// A skipped input, as embedded in `report.json`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Failure {
    pub input: String,
    pub error: String,
}

/// Top-level shape of `report.json`: the exact configuration, its hash,
/// and the per-sector results in input order.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub config_hash: String,
    pub sectors: Vec<SectorReport>,
    pub failures: Vec<Failure>,
}

// --- argument surface ----------------------------------------------------

#[derive(Parser)]
#[command(
    name = "fractsect",
    version,
    about = "Two-scale multifractal diagnostics for return series \
             (overlapping windows, ensemble-decomposition detrending)"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze return-series files and write reports and plot data
    Analyze(AnalyzeArgs),
    /// Generate synthetic benchmark series as TSV
    #[command(subcommand)]
    Synth(SynthCmd),
    /// Run the built-in oracle validation suite
    Validate(ValidateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Flat key=value config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for report.txt, report.json, and plot TSVs
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    s_min: Option<usize>,
    #[arg(long)]
    crossover: Option<usize>,
    #[arg(long)]
    s_max: Option<usize>,
    #[arg(long)]
    per_regime: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    q_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q_max: Option<f64>,
    #[arg(long)]
    q_step: Option<f64>,
    /// Detrend mode: eemd-window, eemd-global, or poly:K
    #[arg(long)]
    detrend: Option<String>,
    /// Ensemble size M for eemd detrend modes
    #[arg(long)]
    ensemble: Option<usize>,
    /// Added-noise amplitude ratio for eemd detrend modes
    #[arg(long)]
    noise_ratio: Option<f64>,
    /// Master seed (overrides FRACTSECT_SEED and the config file)
    #[arg(long)]
    seed: Option<u64>,
    /// CSV column holding dates
    #[arg(long)]
    date_column: Option<String>,
    /// CSV column holding closing prices
    #[arg(long)]
    value_column: Option<String>,
    /// Skip report.txt
    #[arg(long)]
    no_table: bool,
    /// Skip report.json
    #[arg(long)]
    no_json: bool,
    /// Skip per-sector plot TSVs
    #[arg(long)]
    no_plotdata: bool,
    /// Input files: .tsv files are read as return-like series, anything
    /// else as a price CSV (log-returns are taken first). The sector
    /// label is the file stem.
    inputs: Vec<String>,
}

#[derive(Subcommand)]
enum SynthCmd {
    /// Deterministic binomial cascade of 2^LEVELS samples
    Cascade {
        #[arg(long)]
        levels: u32,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (default: "<label>.tsv")
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fractional Gaussian noise via circulant embedding
    Fgn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        hurst: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (default: "<label>.tsv")
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random permutation of an existing TSV series
    Shuffle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path (default: "<stem>_shuffled.tsv")
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ValidateArgs {
    /// Reduced sizes and 1.5x accuracy bands
    #[arg(long)]
    quick: bool,
    /// Master seed (overrides FRACTSECT_SEED)
    #[arg(long)]
    seed: Option<u64>,
}

/// Parse the process arguments and run; returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Synth(synth) => cmd_synth(synth),
        Cmd::Validate(args) => cmd_validate(args),
    }
}

// --- configuration assembly ----------------------------------------------

fn env_seed() -> Result<Option<u64>, String> {
    match std::env::var(ENV_SEED) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| format!("{ENV_SEED} must be an unsigned integer, got {raw:?}")),
        Err(_) => Ok(None),
    }
}

/// Apply one flat key=value file; returns whether it set the seed.
fn apply_config_file(config: &mut RunConfig, path: &Path) -> Result<bool, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut seed_set = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config {} line {}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            ));
        };
        let (key, value) = (key.trim(), value.trim());
        let parse_err = |what: &str| {
            format!(
                "config {} line {}: {key} must be {what}, got {value:?}",
                path.display(),
                lineno + 1
            )
        };
        match key {
            "input" => config.inputs.push(value.to_string()),
            "date_column" => config.date_column = value.to_string(),
            "value_column" => config.value_column = value.to_string(),
            "s_min" => config.s_min = value.parse().map_err(|_| parse_err("an integer"))?,
            "crossover" => config.crossover = value.parse().map_err(|_| parse_err("an integer"))?,
            "s_max" => config.s_max = value.parse().map_err(|_| parse_err("an integer"))?,
            "per_regime" => {
                config.per_regime = value.parse().map_err(|_| parse_err("an integer"))?
            }
            "q_min" => config.q_min = value.parse().map_err(|_| parse_err("a number"))?,
            "q_max" => config.q_max = value.parse().map_err(|_| parse_err("a number"))?,
            "q_step" => config.q_step = value.parse().map_err(|_| parse_err("a number"))?,
            "detrend" => config.detrend = value.to_string(),
            "ensemble" => config.ensemble = value.parse().map_err(|_| parse_err("an integer"))?,
            "noise_ratio" => {
                config.noise_ratio = value.parse().map_err(|_| parse_err("a number"))?
            }
            "seed" => {
                config.seed = value.parse().map_err(|_| parse_err("an unsigned integer"))?;
                seed_set = true;
            }
            "out_dir" => config.out_dir = value.to_string(),
            "emit_table" => {
                config.emit_table = value.parse().map_err(|_| parse_err("true or false"))?
            }
            "emit_json" => {
                config.emit_json = value.parse().map_err(|_| parse_err("true or false"))?
            }
            "emit_plotdata" => {
                config.emit_plotdata = value.parse().map_err(|_| parse_err("true or false"))?
            }
            other => {
                return Err(format!(
                    "config {} line {}: unknown key {other:?}",
                    path.display(),
                    lineno + 1
                ))
            }
        }
    }
    Ok(seed_set)
}

/// Defaults, then config file, then FRACTSECT_SEED, then explicit flags.
fn resolve_config(args: &AnalyzeArgs) -> Result<RunConfig, String> {
    let mut config = RunConfig::default();
    let mut seed_explicit = false;
    if let Some(path) = &args.config {
        seed_explicit = apply_config_file(&mut config, path)?;
    }
    if !seed_explicit && args.seed.is_none() {
        if let Some(env) = env_seed()? {
            config.seed = env;
        }
    }
    macro_rules! flag {
        ($field:ident) => {
            if let Some(v) = &args.$field {
                config.$field = v.clone();
            }
        };
    }
    flag!(date_column);
    flag!(value_column);
    if let Some(v) = args.out.clone() {
        config.out_dir = v;
    }
    if let Some(v) = args.s_min {
        config.s_min = v;
    }
    if let Some(v) = args.crossover {
        config.crossover = v;
    }
    if let Some(v) = args.s_max {
        config.s_max = v;
    }
    if let Some(v) = args.per_regime {
        config.per_regime = v;
    }
    if let Some(v) = args.q_min {
        config.q_min = v;
    }
    if let Some(v) = args.q_max {
        config.q_max = v;
    }
    if let Some(v) = args.q_step {
        config.q_step = v;
    }
    if let Some(v) = &args.detrend {
        config.detrend = v.clone();
    }
    if let Some(v) = args.ensemble {
        config.ensemble = v;
    }
    if let Some(v) = args.noise_ratio {
        config.noise_ratio = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if args.no_table {
        config.emit_table = false;
    }
    if args.no_json {
        config.emit_json = false;
    }
    if args.no_plotdata {
        config.emit_plotdata = false;
    }
    config.inputs.extend(args.inputs.iter().cloned());
    Ok(config)
}

fn parse_detrend(config: &RunConfig) -> Result<Detrender, String> {
    if matches!(config.detrend.as_str(), "eemd-window" | "eemd-global") {
        if config.ensemble == 0 {
            return Err("ensemble must be at least 1".into());
        }
        if !(config.noise_ratio > 0.0 && config.noise_ratio < 1.0) {
            return Err(format!(
                "noise_ratio must lie in (0, 1), got {}",
                config.noise_ratio
            ));
        }
    }
    let eemd = EemdConfig {
        ensemble_size: config.ensemble,
        noise_std_ratio: config.noise_ratio,
        seed: config.seed,
    };
    match config.detrend.as_str() {
        "eemd-window" => Ok(Detrender::Eemd(eemd)),
        "eemd-global" => Ok(Detrender::EemdGlobal(eemd)),
        other => {
            let Some(rest) = other.strip_prefix("poly:") else {
                return Err(format!(
                    "unknown detrend mode {other:?} (expected eemd-window, eemd-global, or poly:K)"
                ));
            };
            let order: usize = rest
                .parse()
                .map_err(|_| format!("poly order must be an integer, got {rest:?}"))?;
            if order > 8 {
                return Err(format!("poly order must be at most 8, got {order}"));
            }
            Ok(Detrender::Poly(order))
        }
    }
}

/// Build the q grid from the configured bounds and step, snapping the
/// points that land on 0 and 2 to those exact values.
fn build_q_grid(config: &RunConfig) -> Result<QGrid, String> {
    if !(config.q_step > 0.0) {
        return Err(format!("q_step must be positive, got {}", config.q_step));
    }
    if config.q_min >= config.q_max {
        return Err(format!(
            "q_min must be below q_max, got [{}, {}]",
            config.q_min, config.q_max
        ));
    }
    let steps = ((config.q_max - config.q_min) / config.q_step).round() as usize;
    let mut values = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let mut q = config.q_min + k as f64 * config.q_step;
        if (q - 0.0).abs() < 1e-9 {
            q = 0.0;
        } else if (q - 2.0).abs() < 1e-9 {
            q = 2.0;
        }
        if q <= config.q_max + 1e-9 {
            values.push(q);
        }
    }
    QGrid::new(values).map_err(|e| format!("bad q grid: {e}"))
}

fn build_params(config: &RunConfig) -> Result<AnalysisParams, String> {
    let grid = mfdfa::scale_grid(
        config.s_min,
        config.crossover,
        config.s_max,
        config.per_regime,
    )
    .map_err(|e| format!("bad scale bounds: {e}"))?;
    Ok(AnalysisParams {
        grid,
        qs: build_q_grid(config)?,
        detrender: parse_detrend(config)?,
    })
}

// --- analyze -------------------------------------------------------------

fn load_input(path: &Path, config: &RunConfig) -> crate::Result<Series> {
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("tsv")) {
        series::read_tsv(file, &label)
    } else {
        let prices = series::load_series(file, &config.date_column, &config.value_column, &label)?;
        series::log_returns(&prices, 1)
    }
}

fn regime_report(
    label: &str,
    curve: Option<&HurstCurve>,
    warnings: &mut Vec<String>,
) -> Option<SpectrumReport> {
    let curve = curve?;
    match spectrum::report_for_curve(curve, spectrum::DEFAULT_CLASSIFICATION_BAND) {
        Ok(report) => Some(report),
        Err(e) => {
            warnings.push(format!(
                "{label}: no {} spectrum: {e}",
                curve.regime.label()
            ));
            None
        }
    }
}

struct SectorArtifacts {
    report: SectorReport,
    analysis: Analysis,
}

fn analyze_one(path: &Path, config: &RunConfig, params: &AnalysisParams) -> crate::Result<SectorArtifacts> {
    let series = load_input(path, config)?;
    let analysis = mfdfa::analyze(&series, params)?;
    let mut warnings = analysis.warnings.clone();
    let short = regime_report(&series.label, analysis.short.as_ref(), &mut warnings);
    let long = regime_report(&series.label, analysis.long.as_ref(), &mut warnings);
    let meta = reference::by_symbol(&series.label).map(|r| r.meta());
    Ok(SectorArtifacts {
        report: SectorReport {
            label: series.label.clone(),
            meta,
            config: config.clone(),
            short,
            long,
            warnings,
        },
        analysis,
    })
}

/// Serialize through `serde_json::Value` so object keys are sorted;
/// parsing the result and re-serializing it reproduces identical bytes.
fn canonical_json<T: serde::Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("value serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

fn sanitize_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    let mut file = File::create(path)?;
    file.write_all(contents.as_bytes())
}

fn render_table(hash: &str, sectors: &[SectorReport], failures: &[Failure]) -> String {
    let mut out = format!("# config={hash}\n{}\n", spectrum::table_header());
    for sector in sectors {
        match &sector.long {
            Some(report) => {
                out.push_str(&spectrum::table_row(&sector.label, report));
                out.push('\n');
            }
            None => out.push_str(&format!("# {}: long regime unavailable\n", sector.label)),
        }
    }
    for failure in failures {
        out.push_str(&format!("# warning: {}: {}\n", failure.input, failure.error));
    }
    out
}

fn render_surface_tsv(hash: &str, analysis: &Analysis) -> String {
    let surface = &analysis.surface;
    let mut out = format!("# config={hash}\nq\ts\tFq\tvalid\n");
    for (qi, &q) in surface.qs.values().iter().enumerate() {
        for (si, &s) in surface.grid.scales.iter().enumerate() {
            let valid = surface.cell_validity(qi, si) == mfdfa::CellValidity::Ok;
            let _ = writeln!(
                out,
                "{q}\t{s}\t{:.16e}\t{}",
                surface.value(qi, si),
                if valid { 1 } else { 0 }
            );
        }
    }
    out
}

fn render_hurst_tsv(hash: &str, analysis: &Analysis) -> String {
    let mut out = format!("# config={hash}\nregime\tq\tH\tstderr\tr2\n");
    for curve in [&analysis.short, &analysis.long].into_iter().flatten() {
        for p in &curve.points {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.16e}\t{:.16e}\t{:.16e}",
                curve.regime.label(),
                p.q,
                p.h,
                p.stderr,
                p.r_squared
            );
        }
    }
    out
}

fn render_tau_tsv(hash: &str, report: &SectorReport) -> String {
    let mut out = format!("# config={hash}\nregime\tq\ttau\n");
    for (regime, spectrum) in [("short", &report.short), ("long", &report.long)] {
        if let Some(spectrum) = spectrum {
            for t in &spectrum.tau {
                let _ = writeln!(out, "{regime}\t{}\t{:.16e}", t.q, t.tau);
            }
        }
    }
    out
}

fn render_falpha_tsv(hash: &str, report: &SectorReport) -> String {
    let mut out = format!("# config={hash}\nregime\tq\talpha\tf\tedge\n");
    for (regime, spectrum) in [("short", &report.short), ("long", &report.long)] {
        if let Some(spectrum) = spectrum {
            for p in &spectrum.spectrum {
                let _ = writeln!(
                    out,
                    "{regime}\t{}\t{:.16e}\t{:.16e}\t{}",
                    p.q,
                    p.alpha,
                    p.f,
                    if p.edge { 1 } else { 0 }
                );
            }
        }
    }
    out
}

fn cmd_analyze(args: AnalyzeArgs) -> i32 {
    let config = match resolve_config(&args) {
        Ok(config) => config,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    if config.inputs.is_empty() {
        eprintln!("error: no inputs");
        return 2;
    }
    let params = match build_params(&config) {
        Ok(params) => params,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let hash = config.hash_hex();
    eprintln!(
        "analyzing {} input(s), detrend {}, config {hash}",
        config.inputs.len(),
        config.detrend
    );

    let results: Vec<(String, crate::Result<SectorArtifacts>)> = config
        .inputs
        .par_iter()
        .map(|input| {
            eprintln!("analyzing {input}");
            let result = analyze_one(Path::new(input), &config, &params);
            (input.clone(), result)
        })
        .collect();

    let mut sectors = Vec::new();
    let mut artifacts = Vec::new();
    let mut failures = Vec::new();
    for (input, result) in results {
        match result {
            Ok(sector) => {
                eprintln!("done {input}: {}", sector.report.label);
                sectors.push(sector.report.clone());
                artifacts.push(sector);
            }
            Err(e) => {
                eprintln!("skipped {input}: {e}");
                failures.push(Failure {
                    input,
                    error: e.to_string(),
                });
            }
        }
    }

    let run_report = RunReport {
        config: config.clone(),
        config_hash: hash.clone(),
        sectors: sectors.clone(),
        failures: failures.clone(),
    };

    let out_dir = PathBuf::from(&config.out_dir);
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return 1;
    }
    let write = |name: &str, contents: &str| -> bool {
        let path = out_dir.join(name);
        match write_file(&path, contents) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                false
            }
        }
    };
    let mut ok = true;
    if config.emit_table {
        ok &= write("report.txt", &render_table(&hash, &sectors, &failures));
    }
    if config.emit_json {
        ok &= write("report.json", &canonical_json(&run_report));
    }
    if config.emit_plotdata {
        for sector in &artifacts {
            let stem = sanitize_label(&sector.report.label);
            ok &= write(
                &format!("{stem}_fq.tsv"),
                &render_surface_tsv(&hash, &sector.analysis),
            );
            ok &= write(
                &format!("{stem}_hurst.tsv"),
                &render_hurst_tsv(&hash, &sector.analysis),
            );
            ok &= write(&format!("{stem}_tau.tsv"), &render_tau_tsv(&hash, &sector.report));
            ok &= write(
                &format!("{stem}_falpha.tsv"),
                &render_falpha_tsv(&hash, &sector.report),
            );
        }
    }
    if !ok {
        return 1;
    }
    eprintln!(
        "wrote {} sector report(s), {} failure(s), to {}",
        sectors.len(),
        failures.len(),
        out_dir.display()
    );
    if sectors.is_empty() {
        eprintln!("error: no sector succeeded");
        return 1;
    }
    0
}

// --- synth ---------------------------------------------------------------

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    Ok(env_seed()?.unwrap_or(validate::DEFAULT_SEED))
}

fn write_series(series: &Series, out: Option<PathBuf>, default_name: String) -> i32 {
    let path = out.unwrap_or_else(|| PathBuf::from(default_name));
    let file = match File::create(&path) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", path.display());
            return 1;
        }
    };
    if let Err(e) = series::write_tsv(series, file) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return 1;
    }
    eprintln!("wrote {} ({} samples)", path.display(), series.len());
    0
}

fn cmd_synth(synth_cmd: SynthCmd) -> i32 {
    match synth_cmd {
        SynthCmd::Cascade {
            levels,
            a,
            seed,
            out,
        } => {
            let seed = match resolve_seed(seed) {
                Ok(s) => s,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return 2;
                }
            };
            match synth::binomial_cascade(&CascadeSpec { levels, a, seed }) {
                Ok(series) => {
                    let name = format!("{}.tsv", sanitize_label(&series.label));
                    write_series(&series, out, name)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        SynthCmd::Fgn { n, hurst, seed, out } => {
            let seed = match resolve_seed(seed) {
                Ok(s) => s,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return 2;
                }
            };
            match synth::fgn(&FgnSpec {
                len: n,
                hurst,
                seed,
            }) {
                Ok(series) => {
                    let name = format!("{}.tsv", sanitize_label(&series.label));
                    write_series(&series, out, name)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        SynthCmd::Shuffle { input, seed, out } => {
            let seed = match resolve_seed(seed) {
                Ok(s) => s,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return 2;
                }
            };
            let label = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "series".into());
            let file = match File::open(&input) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: cannot open {}: {e}", input.display());
                    return 2;
                }
            };
            let series = match series::read_tsv(file, &label) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            match synth::shuffle(&series, seed) {
                Ok(shuffled) => {
                    let name = format!("{}_shuffled.tsv", sanitize_label(&label));
                    write_series(&shuffled, out, name)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
    }
}

// --- validate ------------------------------------------------------------

fn cmd_validate(args: ValidateArgs) -> i32 {
    let seed = match resolve_seed(args.seed) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let mode = if args.quick { Mode::Quick } else { Mode::Full };
    let mut outcomes = Vec::with_capacity(validate::CRITERION_COUNT);
    for id in 1..=validate::CRITERION_COUNT {
        eprintln!("running criterion {id}...");
        let start = Instant::now();
        let outcome = validate::criterion(id, mode, seed);
        eprintln!(
            "criterion {id} {} in {:.1} s",
            if outcome.passed { "passed" } else { "FAILED" },
            start.elapsed().as_secs_f64()
        );
        outcomes.push(outcome);
    }
    let report = validate::ValidationReport {
        mode,
        seed,
        outcomes,
    };
    print!("{}", report.render());
    if report.all_passed() {
        0
    } else {
        1
    }
}
