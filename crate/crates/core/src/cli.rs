//! Command-line front end: single runs, sweeps, figure data and the
//! validation suite.
//!
//! Settings come from built-in defaults, then an optional flat `key = value`
//! file (`--config`), then flags. Flags and file keys share one parser, so
//! `--t-grid 0:5:400` and `t_grid = 0:5:400` are interchangeable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::deform::{DeformationCoeffs, SignPattern, Statistics};
use crate::noise::{BathParams, ChannelKind};
use crate::oracle::{self, Faults};
use crate::pipeline::{self, DeformationSpec, PipelineError, Scenario, SweepGrid, SweepRow};

pub const CSV_HEADER: &str = "channel,eta,indist,td,t,concurrence,fidelity,p_lr";

pub const FIGURE_IDS: [&str; 9] =
    ["conc-pd", "fid-pd", "prob-pd", "conc-dep", "fid-dep", "prob-dep", "conc-ad", "fid-ad", "prob-ad"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("scenario error: {0}")]
    Scenario(#[from] PipelineError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Scenario(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Validation(_) => 5,
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "slocc", version, about = "Entanglement recovery of noisy identical qubits by sLOCC")]
pub struct Cli {
    #[command(flatten)]
    pub globals: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Flat `key = value` settings file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub gamma0: Option<String>,
    /// Bath spectral width.
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    /// phase | dep | ad (comma list for sweeps).
    #[arg(long, global = true)]
    pub channel: Option<String>,
    /// fermion | boson (comma list for sweeps).
    #[arg(long, global = true)]
    pub eta: Option<String>,
    /// positive | negative:{l,r,lp,rp}; defaults to the canonical pattern.
    #[arg(long = "sign-pattern", global = true)]
    pub sign_pattern: Option<String>,
    /// Degrees of indistinguishability, comma-separated.
    #[arg(long, global = true)]
    pub indist: Option<String>,
    /// Explicit `l,r,lp,rp` (run only; overrides --indist).
    #[arg(long, global = true)]
    pub coeffs: Option<String>,
    /// Deformation times γ₀tD, comma-separated.
    #[arg(long, global = true)]
    pub td: Option<String>,
    /// start:stop:points in units of 1/γ₀.
    #[arg(long = "t-grid", global = true)]
    pub t_grid: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv | json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Seed of the validation sampling.
    #[arg(long, global = true)]
    pub seed: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One scenario, printed as a key-value block.
    Run {
        /// Total time γ₀t.
        #[arg(long)]
        t: Option<String>,
    },
    /// Grid over channel × eta × indist × td × t.
    Sweep,
    /// Data behind one of the figures (conc|fid|prob)-(pd|dep|ad).
    Figure { id: String },
    /// Oracle cross-checks.
    Validate {
        /// Scales the phase-damping generator seen by the RK4 check.
        #[arg(long, hide = true)]
        inject_pd_scale: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TGrid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points).map(|k| self.start + (self.stop - self.start) * k as f64 / n as f64).collect()
    }
}

/// Resolved settings. List-valued entries stay `None` until set so that each
/// command can apply its own defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub gamma0: f64,
    pub lambda: f64,
    pub channels: Vec<ChannelKind>,
    pub statistics: Vec<Statistics>,
    pub sign_pattern: Option<SignPattern>,
    pub indist: Option<Vec<f64>>,
    pub coeffs: Option<[f64; 4]>,
    pub t_deform: Option<Vec<f64>>,
    pub t_grid: Option<TGrid>,
    pub t: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            gamma0: 1.0,
            lambda: 3.0,
            channels: vec![ChannelKind::PhaseDamping],
            statistics: vec![Statistics::Fermion],
            sign_pattern: None,
            indist: None,
            coeffs: None,
            t_deform: None,
            t_grid: None,
            t: None,
            out: None,
            format: Format::Csv,
            seed: 0,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = v.trim().parse().map_err(|_| config_err(format!("{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(config_err(format!("{key}: '{v}' is not finite")));
    }
    Ok(x)
}

fn parse_list<T>(key: &str, v: &str, item: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    let out: Vec<T> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(config_err(format!("{key}: empty list")));
    }
    Ok(out)
}

fn parse_t_grid(v: &str) -> Result<TGrid, CliError> {
    let parts: Vec<&str> = v.split(':').collect();
    let [start, stop, points] = parts[..] else {
        return Err(config_err(format!("t_grid: '{v}' is not start:stop:points")));
    };
    let start = parse_f64("t_grid", start)?;
    let stop = parse_f64("t_grid", stop)?;
    let points: usize = points.trim().parse().map_err(|_| config_err(format!("t_grid: '{points}' is not a count")))?;
    if points < 2 {
        return Err(config_err("t_grid: need at least 2 points"));
    }
    if !(stop > start) || start < 0.0 {
        return Err(config_err("t_grid: need 0 <= start < stop"));
    }
    Ok(TGrid { start, stop, points })
}

impl Config {
    /// Applies one setting. Keys accept `-` or `_` interchangeably.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "gamma0" => self.gamma0 = parse_f64("gamma0", value)?,
            "lambda" => self.lambda = parse_f64("lambda", value)?,
            "channel" => {
                self.channels = parse_list("channel", value, |s| s.parse().map_err(config_err))?;
            }
            "eta" | "statistics" => {
                self.statistics = parse_list("eta", value, |s| s.parse().map_err(config_err))?;
            }
            "sign_pattern" => self.sign_pattern = Some(value.parse().map_err(config_err)?),
            "indist" => {
                let list = parse_list("indist", value, |s| parse_f64("indist", s))?;
                if let Some(bad) = list.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                    return Err(config_err(format!("indist: {bad} outside [0, 1]")));
                }
                self.indist = Some(list);
            }
            "coeffs" => {
                let list = parse_list("coeffs", value, |s| parse_f64("coeffs", s))?;
                let arr: [f64; 4] =
                    list.try_into().map_err(|_| config_err("coeffs: expected four values l,r,lp,rp"))?;
                self.coeffs = Some(arr);
            }
            "td" | "t_deform" => {
                let list = parse_list("td", value, |s| parse_f64("td", s))?;
                if list.iter().any(|&x| x < 0.0) {
                    return Err(config_err("td: deformation times must be non-negative"));
                }
                self.t_deform = Some(list);
            }
            "t_grid" => self.t_grid = Some(parse_t_grid(value)?),
            "t" => self.t = Some(parse_f64("t", value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => {
                self.format = match value.to_ascii_lowercase().as_str() {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    other => return Err(config_err(format!("format: '{other}' (expected csv or json)"))),
                }
            }
            "seed" => {
                self.seed = value.parse().map_err(|_| config_err(format!("seed: '{value}' is not a u64")))?;
            }
            other => return Err(config_err(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a flat settings file: one `key = value` per line, `#` comments.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| config_err(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v).map_err(|e| match e {
                CliError::Config(msg) => config_err(format!("line {}: {msg}", n + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn bath(&self) -> Result<BathParams, CliError> {
        BathParams::new(self.gamma0, self.lambda).map_err(|e| config_err(e.to_string()))
    }

    fn single_channel(&self) -> Result<ChannelKind, CliError> {
        match self.channels[..] {
            [c] => Ok(c),
            _ => Err(config_err("run takes a single channel")),
        }
    }

    fn single_statistics(&self) -> Result<Statistics, CliError> {
        match self.statistics[..] {
            [s] => Ok(s),
            _ => Err(config_err("run takes a single eta")),
        }
    }
}

fn single(key: &str, list: &Option<Vec<f64>>, default: f64) -> Result<f64, CliError> {
    match list.as_deref() {
        None => Ok(default),
        Some([x]) => Ok(*x),
        Some(_) => Err(config_err(format!("run takes a single {key} value"))),
    }
}

/// Builds the effective configuration from file and flags.
pub fn resolve_config(globals: &GlobalArgs, run_t: Option<&str>) -> Result<Config, CliError> {
    let mut cfg = Config::default();
    if let Some(path) = &globals.config {
        let text = fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_file_contents(&text)?;
    }
    let flags: [(&str, Option<&str>); 12] = [
        ("gamma0", globals.gamma0.as_deref()),
        ("lambda", globals.lambda.as_deref()),
        ("channel", globals.channel.as_deref()),
        ("eta", globals.eta.as_deref()),
        ("sign_pattern", globals.sign_pattern.as_deref()),
        ("indist", globals.indist.as_deref()),
        ("coeffs", globals.coeffs.as_deref()),
        ("td", globals.td.as_deref()),
        ("t_grid", globals.t_grid.as_deref()),
        ("format", globals.format.as_deref()),
        ("seed", globals.seed.as_deref()),
        ("t", run_t),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    if let Some(out) = &globals.out {
        cfg.out = Some(out.clone());
    }
    Ok(cfg)
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, `NaN` for missing.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const P: i32 = 12;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Serialize)]
struct JsonRow {
    channel: &'static str,
    eta: &'static str,
    indist: f64,
    td: f64,
    t: f64,
    concurrence: Option<f64>,
    fidelity: Option<f64>,
    p_lr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn json_row(r: &SweepRow) -> JsonRow {
    let (c, f, p, error) = match &r.outcome {
        Ok(v) => (Some(v.concurrence), Some(v.fidelity), Some(v.p_lr), None),
        Err(e) => (None, None, None, Some(e.to_string())),
    };
    JsonRow {
        channel: r.point.channel.short_name(),
        eta: r.point.statistics.name(),
        indist: r.point.indist,
        td: r.point.t_deform,
        t: r.point.t,
        concurrence: c,
        fidelity: f,
        p_lr: p,
        error,
    }
}

/// Renders sweep rows; error rows carry `NaN` metrics in CSV.
pub fn render_rows(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::with_capacity(64 * (rows.len() + 1));
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let (c, f, p) = match &r.outcome {
                    Ok(v) => (v.concurrence, v.fidelity, v.p_lr),
                    Err(_) => (f64::NAN, f64::NAN, f64::NAN),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.point.channel.short_name(),
                    r.point.statistics.name(),
                    fmt_num(r.point.indist),
                    fmt_num(r.point.t_deform),
                    fmt_num(r.point.t),
                    fmt_num(c),
                    fmt_num(f),
                    fmt_num(p),
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<JsonRow> = rows.iter().map(json_row).collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

fn write_output(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

const FIG_INDIST_CONC: [f64; 4] = [0.2, 0.5, 0.8, 1.0];
const FIG_INDIST_PROB: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const FIG_T_DEFORM: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
const FIG_T_GRID: TGrid = TGrid { start: 0.0, stop: 5.0, points: 400 };
const FIG_FID_INDIST_POINTS: usize = 21;

/// Grid behind a figure id. Explicit `indist`, `td`, `t_grid` and `eta`
/// settings replace the figure defaults.
pub fn figure_grid(id: &str, cfg: &Config) -> Result<SweepGrid, CliError> {
    let (kind, chan) = id
        .split_once('-')
        .ok_or_else(|| config_err(format!("unknown figure '{id}' (expected one of {})", FIGURE_IDS.join(", "))))?;
    let channel = match chan {
        "pd" => ChannelKind::PhaseDamping,
        "dep" => ChannelKind::Depolarizing,
        "ad" => ChannelKind::AmplitudeDamping,
        _ => return Err(config_err(format!("unknown figure '{id}'"))),
    };
    let (indist, relative_times) = match kind {
        "conc" => (FIG_INDIST_CONC.to_vec(), false),
        "fid" => {
            let n = FIG_FID_INDIST_POINTS - 1;
            ((0..=n).map(|k| k as f64 / n as f64).collect(), true)
        }
        "prob" => (FIG_INDIST_PROB.to_vec(), true),
        _ => return Err(config_err(format!("unknown figure '{id}'"))),
    };
    Ok(SweepGrid {
        bath: cfg.bath()?,
        channels: vec![channel],
        statistics: cfg.statistics.clone(),
        indist: cfg.indist.clone().unwrap_or(indist),
        t_deform: cfg.t_deform.clone().unwrap_or_else(|| FIG_T_DEFORM.to_vec()),
        times: cfg.t_grid.unwrap_or(FIG_T_GRID).values(),
        relative_times,
    })
}

pub fn sweep_grid(cfg: &Config) -> Result<SweepGrid, CliError> {
    if cfg.coeffs.is_some() {
        return Err(config_err("coeffs apply to run only; sweeps use indist"));
    }
    Ok(SweepGrid {
        bath: cfg.bath()?,
        channels: cfg.channels.clone(),
        statistics: cfg.statistics.clone(),
        indist: cfg.indist.clone().unwrap_or_else(|| FIG_INDIST_CONC.to_vec()),
        t_deform: cfg.t_deform.clone().unwrap_or_else(|| FIG_T_DEFORM.to_vec()),
        times: cfg.t_grid.unwrap_or(FIG_T_GRID).values(),
        relative_times: false,
    })
}

fn scenario_from(cfg: &Config) -> Result<Scenario, CliError> {
    let channel = cfg.single_channel()?;
    let statistics = cfg.single_statistics()?;
    let deformation = match cfg.coeffs {
        Some([l, r, lp, rp]) => DeformationSpec::Coeffs(
            DeformationCoeffs::new(l, r, lp, rp, statistics).map_err(|e| config_err(e.to_string()))?,
        ),
        None => DeformationSpec::Target {
            indist: single("indist", &cfg.indist, 0.5)?,
            statistics,
            sign_pattern: cfg.sign_pattern.unwrap_or_else(|| SignPattern::canonical_for(statistics)),
        },
    };
    let t_deform = single("td", &cfg.t_deform, 1.0)?;
    let t_total = cfg.t.unwrap_or(t_deform.max(3.0));
    Ok(Scenario { channel, bath: cfg.bath()?, deformation, t_deform, t_total })
}

#[derive(Debug, Serialize)]
struct RunRecord<'a> {
    scenario: &'a Scenario,
    result: &'a pipeline::ScenarioResult,
}

fn pops_line(p: &crate::qstate::PopulationVector) -> String {
    let labels = p.basis().labels();
    labels.iter().zip(p.values()).map(|(l, v)| format!("{l}={}", fmt_num(v))).collect::<Vec<_>>().join(" ")
}

fn cmd_run(cfg: &Config, explicit_format: bool) -> Result<(), CliError> {
    let s = scenario_from(cfg)?;
    let r = pipeline::run(&s)?;
    let record = RunRecord { scenario: &s, result: &r };
    if cfg.format == Format::Json && explicit_format && cfg.out.is_none() {
        let body = serde_json::to_string_pretty(&record).expect("plain data serializes") + "\n";
        return write_output(None, &body);
    }

    let mut block = String::new();
    let kv = |b: &mut String, k: &str, v: String| {
        let _ = writeln!(b, "{k:<16}{v}");
    };
    kv(&mut block, "channel", s.channel.short_name().into());
    kv(&mut block, "eta", s.deformation.statistics().name().into());
    kv(&mut block, "indist", fmt_num(r.indistinguishability));
    kv(&mut block, "td", fmt_num(s.t_deform));
    kv(&mut block, "t", fmt_num(s.t_total));
    kv(&mut block, "concurrence", fmt_num(r.concurrence));
    kv(&mut block, "fidelity", fmt_num(r.fidelity));
    kv(&mut block, "p_lr", fmt_num(r.p_lr));
    kv(&mut block, "pops_predeform", pops_line(&r.pops_predeform));
    kv(&mut block, "pops_final", pops_line(&r.pops_final));
    kv(&mut block, "pops_lr", pops_line(&r.pops_lr));
    write_output(None, &block)?;

    if let Some(path) = &cfg.out {
        let body = match cfg.format {
            Format::Json => serde_json::to_string_pretty(&record).expect("plain data serializes") + "\n",
            Format::Csv => format!(
                "{CSV_HEADER}\n{},{},{},{},{},{},{},{}\n",
                s.channel.short_name(),
                s.deformation.statistics().name(),
                fmt_num(r.indistinguishability),
                fmt_num(s.t_deform),
                fmt_num(s.t_total),
                fmt_num(r.concurrence),
                fmt_num(r.fidelity),
                fmt_num(r.p_lr),
            ),
        };
        write_output(Some(path), &body)?;
    }
    Ok(())
}

fn cmd_figure(id: &str, cfg: &Config) -> Result<(), CliError> {
    let grid = figure_grid(id, cfg)?;
    let rows = pipeline::sweep(&grid);
    let ext = match cfg.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("{id}.{ext}")));
    write_output(Some(&path), &render_rows(&rows, cfg.format))?;
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    eprintln!("wrote {} rows to {} ({failed} error rows)", rows.len(), path.display());
    Ok(())
}

fn cmd_validate(cfg: &Config, faults: Faults) -> Result<(), CliError> {
    let report = oracle::run_suite(cfg.seed, &faults);
    let body = match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                #[serde(flatten)]
                check: &'a oracle::CheckResult,
                passed: bool,
            }
            let rows: Vec<Row> = report.checks.iter().map(|c| Row { check: c, passed: c.passed() }).collect();
            serde_json::to_string_pretty(&serde_json::json!({ "seed": report.seed, "checks": rows }))
                .expect("plain data serializes")
                + "\n"
        }
        Format::Csv => {
            let mut b = format!("seed {}\n", report.seed);
            let _ = writeln!(b, "{:<32}{:>8}  {:<12}{:<10}status", "check", "samples", "max_dev", "tol");
            for c in &report.checks {
                let status = match (c.passed(), c.errors) {
                    (true, _) => "ok".to_string(),
                    (false, 0) => "FAIL".to_string(),
                    (false, n) => format!("FAIL ({n} samples raised errors)"),
                };
                let _ = writeln!(
                    b,
                    "{:<32}{:>8}  {:<12}{:<10}{}",
                    c.name,
                    c.samples,
                    format!("{:.3e}", c.max_deviation),
                    format!("{:.0e}", c.tolerance),
                    status
                );
            }
            b
        }
    };
    write_output(cfg.out.as_deref(), &body)?;
    let failing: Vec<&str> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failing.join(", ")))
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let run_t = match &cli.command {
        Command::Run { t } => t.as_deref(),
        _ => None,
    };
    let cfg = resolve_config(&cli.globals, run_t)?;
    let explicit_format = cli.globals.format.is_some();
    match &cli.command {
        Command::Run { .. } => cmd_run(&cfg, explicit_format),
        Command::Sweep => {
            let rows = pipeline::sweep(&sweep_grid(&cfg)?);
            write_output(cfg.out.as_deref(), &render_rows(&rows, cfg.format))
        }
        Command::Figure { id } => cmd_figure(id, &cfg),
        Command::Validate { inject_pd_scale } => {
            let faults = Faults { pd_generator_scale: inject_pd_scale.unwrap_or(1.0) };
            cmd_validate(&cfg, faults)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
