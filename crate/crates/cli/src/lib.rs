//! Command-line front end for the `rootnum` library.
//!
//! [`run`] executes one [`RunConfig`] and returns the emitted report stream
//! together with the exit status, so the binary is a thin wrapper.

pub mod record;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use record::{AppendixRecord, ObservationRecord, ReportRecord, TableCheck};
use rootnum::curves::{genus_plane_model, plane, verify_plane_model, verify_rationality};
use rootnum::hilbert::{calibrate_j, CalibrationReport, JTable, Observation};
use rootnum::root_number::{prepare, RootNumberError};
use rootnum::tables::{self, Row};
use rootnum::{CurveParams, OddPrime};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

pub const PRECISION_ENV: &str = "ROOTNUM_PRECISION";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Global root number at a single parameter point.
    Rootnumber,
    /// Root numbers over an inclusive δ range; invalid δ are skipped.
    Sweep,
    /// Reproduce the ℓ = 3, N = 2 reference tables.
    VerifyTables,
    /// Fit J against reference tables (`--tables T1`, `T2+T3`, `all`).
    CalibrateJ,
    /// Rationality and plane-model checks for the auxiliary curves.
    VerifyAppendix,
    /// Decomposition `a = ε ℓ^b (1 + c)` only.
    Decompose,
    /// Decomposition plus branch and conductor exponents.
    Conductor,
}

/// Inclusive range of δ, written `a..b` or as a single integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaRange {
    pub start: u64,
    pub end: u64,
}

impl DeltaRange {
    pub fn single(&self) -> Option<u64> {
        (self.start == self.end).then_some(self.start)
    }
}

impl FromStr for DeltaRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("invalid δ '{x}': {e}"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (parse(a)?, parse(b)?)
            }
            None => {
                let d = parse(s)?;
                (d, d)
            }
        };
        if start > end {
            return Err(format!("empty δ range {start}..{end}"));
        }
        Ok(DeltaRange { start, end })
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "rootnum", version, about = "Root numbers of twisted Fermat quotient curves")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true)]
    pub ell: Option<u64>,
    #[arg(long = "N", alias = "level", global = true)]
    pub level: Option<u32>,
    #[arg(long, global = true)]
    pub r: Option<u64>,
    #[arg(long, global = true)]
    pub s: Option<u64>,
    #[arg(long, global = true)]
    pub t: Option<u64>,
    /// A single δ, or an inclusive range `a..b` for `sweep`.
    #[arg(long, global = true)]
    pub delta: Option<DeltaRange>,
    /// Working precision in ℓ-adic digits; raised automatically on exhaustion.
    #[arg(long, env = PRECISION_ENV, global = true)]
    pub precision: Option<u32>,
    /// J table file to read (or, for `calibrate-j`, to write).
    #[arg(long = "j-table", global = true)]
    pub j_table: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Use the unit part of non-integral symbol arguments instead of reporting a diagnostic.
    #[arg(long, global = true)]
    pub lenient: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Reference tables for `calibrate-j`.
    #[arg(long, default_value = "all", global = true)]
    pub tables: String,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            ell: None,
            level: None,
            r: None,
            s: None,
            t: None,
            delta: None,
            precision: None,
            j_table: None,
            format: Format::Text,
            lenient: false,
            seed: None,
            tables: "all".into(),
        }
    }

    pub fn with_params(mut self, ell: u64, level: u32, r: u64, s: u64, t: u64, delta: DeltaRange) -> Self {
        self.ell = Some(ell);
        self.level = Some(level);
        self.r = Some(r);
        self.s = Some(s);
        self.t = Some(t);
        self.delta = Some(delta);
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(d) = self.delta {
            if d.single().is_none() && self.command != Command::Sweep {
                return Err(CliError::Usage("a δ range is only accepted by sweep".into()));
            }
        }
        Ok(())
    }

    fn params_at(&self, delta: u64) -> Result<CurveParams, CliError> {
        let need = |name: &str| CliError::Usage(format!("--{name} is required"));
        let p = CurveParams::new(
            self.ell.ok_or_else(|| need("ell"))?,
            self.level.ok_or_else(|| need("N"))?,
            self.r.ok_or_else(|| need("r"))?,
            self.s.ok_or_else(|| need("s"))?,
            self.t.ok_or_else(|| need("t"))?,
            delta,
        )?;
        Ok(p)
    }

    fn point(&self) -> Result<CurveParams, CliError> {
        let d = self.delta.ok_or_else(|| CliError::Usage("--delta is required".into()))?;
        self.params_at(d.single().expect("validated"))
    }

    fn load_table(&self, prime: OddPrime) -> Result<JTable, CliError> {
        match &self.j_table {
            None => Ok(JTable::new(prime)),
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                JTable::parse(&text, prime).map_err(|e| CliError::Params(format!("{}: {e}", path.display())))
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("{0}")]
    Precision(String),
    #[error("{0}")]
    Failure(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Params(_) => 2,
            CliError::Precision(_) => 3,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<rootnum::params::ParamError> for CliError {
    fn from(e: rootnum::params::ParamError) -> Self {
        CliError::Params(e.to_string())
    }
}

impl From<RootNumberError> for CliError {
    fn from(e: RootNumberError) -> Self {
        match e {
            RootNumberError::PrecisionExhausted { .. } => CliError::Precision(e.to_string()),
            e => CliError::Failure(e.to_string()),
        }
    }
}

/// Emitted report stream and exit status of one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(e: CliError) -> Self {
        Output { status: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

pub fn run(config: &RunConfig) -> Output {
    let mut out = Output::default();
    let result = config.validate().and_then(|()| match config.command {
        Command::Rootnumber => rootnumber(config, &mut out),
        Command::Sweep => sweep(config, &mut out),
        Command::VerifyTables => verify_tables(config, &mut out),
        Command::CalibrateJ => calibrate(config, &mut out),
        Command::VerifyAppendix => verify_appendix(config, &mut out),
        Command::Decompose => decompose(config, &mut out, false),
        Command::Conductor => decompose(config, &mut out, true),
    });
    match result {
        Ok(()) => out,
        Err(e) => {
            let mut failed = Output::fail(e);
            failed.stderr.insert_str(0, &out.stderr);
            failed
        }
    }
}

pub fn emit<T: Serialize>(records: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
        }
        Format::Text => {
            let mut s = String::new();
            for r in records {
                let value = serde_json::to_value(r).map_err(|e| CliError::Io(e.to_string()))?;
                let fields: Vec<String> = value
                    .as_object()
                    .into_iter()
                    .flatten()
                    .map(|(k, v)| match v {
                        serde_json::Value::String(x) => format!("{k}={x}"),
                        serde_json::Value::Null => format!("{k}=-"),
                        other => format!("{k}={other}"),
                    })
                    .collect();
                s.push_str(&fields.join(" "));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn evaluate(config: &RunConfig, params: &CurveParams, table: &JTable) -> Result<ReportRecord, CliError> {
    let prepared = prepare(params, config.precision)?;
    let report = prepared.evaluate(table, config.lenient)?;
    Ok(ReportRecord::from_report(&report))
}

fn rootnumber(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let params = config.point()?;
    let table = config.load_table(params.ell())?;
    let record = evaluate(config, &params, &table)?;
    out.stdout = emit(&[record], config.format)?;
    Ok(())
}

fn sweep(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let range = config.delta.ok_or_else(|| CliError::Usage("--delta is required".into()))?;
    let ell = config.ell.ok_or_else(|| CliError::Usage("--ell is required".into()))?;
    let prime = OddPrime::new(ell).ok_or_else(|| CliError::Params(format!("ℓ = {ell} is not an odd prime")))?;
    let table = config.load_table(prime)?;

    let deltas: Vec<u64> = (range.start..=range.end).collect();
    let results: Vec<Result<ReportRecord, CliError>> =
        deltas.par_iter().map(|&d| config.params_at(d).and_then(|p| evaluate(config, &p, &table))).collect();
    let mut records = Vec::new();
    for (d, r) in deltas.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(CliError::Params(msg)) => {
                let _ = writeln!(out.stderr, "note: skipped δ = {d}: {msg}");
            }
            Err(e) => return Err(e),
        }
    }
    if records.is_empty() {
        return Err(CliError::Params(format!("no valid δ in {}..{}", range.start, range.end)));
    }
    out.stdout = emit(&records, config.format)?;
    Ok(())
}

fn decompose(config: &RunConfig, out: &mut Output, classify: bool) -> Result<(), CliError> {
    let params = config.point()?;
    let prepared = prepare(&params, config.precision)?;
    let record = ReportRecord::from_prepared(&prepared, classify);
    out.stdout = emit(&[record], config.format)?;
    Ok(())
}

/// Reference tables named by `names`: `all`, a single name, or names joined with `+`.
pub fn select_tables(names: &str) -> Result<Vec<&'static tables::ReferenceTable>, CliError> {
    if names.eq_ignore_ascii_case("all") {
        return Ok(tables::TABLES.iter().collect());
    }
    names.split('+')
        .map(|name| tables::table(name.trim()).ok_or_else(|| CliError::Usage(format!("unknown table '{name}'"))))
        .collect()
}

pub fn observations_for(selected: &[&tables::ReferenceTable]) -> Vec<Observation> {
    selected.iter().flat_map(|t| t.observations()).collect()
}

fn calibration_records(report: &CalibrationReport) -> Vec<ObservationRecord> {
    report
        .outcomes
        .iter()
        .map(|o| {
            let conflicts: Vec<&str> = report
                .conflicts
                .iter()
                .filter_map(|c| {
                    if c.first == o.label {
                        Some(c.second.as_str())
                    } else if c.second == o.label {
                        Some(c.first.as_str())
                    } else {
                        None
                    }
                })
                .collect();
            ObservationRecord::new(o, o.key.and_then(|k| report.table.get(k)), &conflicts)
        })
        .collect()
}

fn calibration_summary(name: &str, report: &CalibrationReport) -> String {
    let mut s = format!(
        "calibration {name}: {}/{} matched ({} individually satisfiable)\n",
        report.matched(),
        report.total(),
        report.satisfiable()
    );
    for fit in &report.fits {
        let ties: Vec<String> = fit.ties.iter().map(|j| j.to_string()).collect();
        let _ = writeln!(
            s,
            "  J({},{}) = {}: {}/{} at this key; ties {}",
            fit.key.0,
            fit.key.1,
            fit.chosen,
            fit.best_count,
            fit.observations,
            ties.join(" ")
        );
    }
    for c in &report.conflicts {
        let _ = writeln!(s, "  CONFLICT at J({},{}): {} vs {}", c.key.0, c.key.1, c.first, c.second);
    }
    s
}

fn calibrate(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let selected = select_tables(&config.tables)?;
    let report = calibrate_j(&observations_for(&selected), config.precision, config.lenient)?;
    let names: Vec<&str> = selected.iter().map(|t| t.name).collect();
    out.stderr.push_str(&calibration_summary(&names.join("+"), &report));
    if let Some(path) = &config.j_table {
        std::fs::write(path, report.table.to_text()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    out.stdout = match config.format {
        Format::Text => {
            let mut s = calibration_summary(&names.join("+"), &report);
            s.push_str(&emit(&calibration_records(&report), Format::Text)?);
            s
        }
        f => emit(&calibration_records(&report), f)?,
    };
    Ok(())
}

fn check_row(row: &Row, config: &RunConfig, calibrated: &CalibrationReport) -> Result<TableCheck, CliError> {
    let prepared = prepare(&row.params, config.precision)?;
    let label = row.label();
    let outcome = calibrated.outcomes.iter().find(|o| o.label == label);
    Ok(TableCheck::new(row, &prepared.decomposition, outcome.and_then(|o| o.predicted)))
}

fn verify_tables(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let mut checks = Vec::new();
    for table in &tables::TABLES {
        let report = calibrate_j(&table.observations(), config.precision, config.lenient)?;
        out.stderr.push_str(&calibration_summary(table.name, &report));
        for row in table.rows() {
            checks.push(check_row(&row, config, &report)?);
        }
    }
    let joint = calibrate_j(&observations_for(&select_tables("T2+T3")?), config.precision, config.lenient)?;
    out.stderr.push_str(&calibration_summary("T2+T3", &joint));

    let failed = checks.iter().filter(|c| c.valuations != "PASS").count();
    let _ = writeln!(out.stderr, "valuation rows: {}/{} PASS", checks.len() - failed, checks.len());
    out.stdout = emit(&checks, config.format)?;
    if failed > 0 {
        out.status = 1;
    }
    Ok(())
}

fn verify_appendix(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let ells = match config.ell {
        Some(e) => vec![e],
        None => vec![3, 5, 7],
    };
    let level = config.level.unwrap_or(2);
    let seed = config.seed.unwrap_or(plane::DEFAULT_SEED);
    let mut records = Vec::new();
    for ell in ells {
        let invalid = |e: rootnum::curves::CurveError| CliError::Params(e.to_string());
        let rationality = verify_rationality(ell, level).map_err(invalid)?;
        let plane = verify_plane_model(ell, seed, plane::DEFAULT_TRIALS).map_err(invalid)?;
        records.push(AppendixRecord::new(&rationality, &plane, genus_plane_model(ell)));
    }
    let failed = records.iter().filter(|r| !r.verified).count();
    out.stdout = emit(&records, config.format)?;
    if failed > 0 {
        let _ = writeln!(out.stderr, "appendix checks failed for {failed} prime(s)");
        out.status = 1;
    }
    Ok(())
}
