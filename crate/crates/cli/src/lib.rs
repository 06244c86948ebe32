//! Request handling, rendering and the result cache behind the `hfk` binary.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;
use twobridge_hfk::complex::{compute_all, ComputeOptions, InvariantReport, KnotComplex};
use twobridge_hfk::{
    knot_classes, normalize_params, oracle, params_from_crossings, CrossingWord, TwoBridgeParams,
};

/// Largest `p` accepted with `--validate`; the oracle is exponential.
pub const ORACLE_MAX_P: i64 = 7;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal check failed: {0}")]
    CheckFailed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidInput(_) => 2,
            CliError::CheckFailed(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<twobridge_hfk::Error> for CliError {
    fn from(e: twobridge_hfk::Error) -> Self {
        match e {
            twobridge_hfk::Error::Param(p) => CliError::InvalidInput(p.to_string()),
            twobridge_hfk::Error::Check(c) => CliError::CheckFailed(c.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Params { p: i64, q: i64 },
    Crossings(Vec<i64>),
}

impl Input {
    pub fn resolve(&self) -> Result<TwoBridgeParams, CliError> {
        let r = match self {
            Input::Params { p, q } => normalize_params(*p, *q),
            Input::Crossings(c) => params_from_crossings(&CrossingWord(c.clone())),
        };
        r.map_err(|e| CliError::InvalidInput(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Graded,
    Filtered,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub input: Input,
    pub flavors: Vec<Flavor>,
    /// Truncation order of the minus flavor; defaults to `2p`.
    pub truncation: Option<u32>,
    pub validate: bool,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
}

/// Graded and filtered are always computed; `minus` is optional.
fn canonical_flavors(requested: &[Flavor]) -> Vec<Flavor> {
    let mut f = vec![Flavor::Graded, Flavor::Filtered];
    f.extend(requested.iter().copied());
    f.sort();
    f.dedup();
    f
}

#[derive(Serialize)]
struct CacheKey<'a> {
    params: &'a TwoBridgeParams,
    flavors: &'a [Flavor],
    truncation: Option<u32>,
    validate: bool,
    version: &'a str,
}

pub fn cache_key(
    params: &TwoBridgeParams,
    flavors: &[Flavor],
    truncation: Option<u32>,
    validate: bool,
) -> String {
    let key = CacheKey {
        params,
        flavors,
        truncation,
        validate,
        version: twobridge_hfk::VERSION,
    };
    let bytes = serde_json::to_vec(&key).expect("cache key serializes");
    hex::encode(Sha256::digest(&bytes))
}

fn cache_read(path: &Path) -> Option<InvariantReport> {
    let text = fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so concurrent writers never expose partial files.
fn cache_write(dir: &Path, path: &Path, report: &InvariantReport) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(render_json(report).as_bytes())?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

fn compute(
    params: TwoBridgeParams,
    flavors: &[Flavor],
    truncation: Option<u32>,
    validate: bool,
) -> Result<InvariantReport, CliError> {
    if validate && params.p() > ORACLE_MAX_P {
        return Err(CliError::InvalidInput(format!(
            "--validate is limited to p <= {ORACLE_MAX_P}"
        )));
    }
    let options = ComputeOptions {
        minus_truncation: truncation,
        ..ComputeOptions::default()
    };
    let mut report = compute_all(params, &options)?;
    if validate {
        let kc = KnotComplex::build(params)?;
        let n = truncation.unwrap_or(2 * params.p() as u32);
        oracle::validate(&kc, n).map_err(|e| CliError::CheckFailed(e.to_string()))?;
        report.diagnostics.oracle_validated = Some(true);
    }
    report.diagnostics.flavors = flavors
        .iter()
        .map(|f| format!("{f:?}").to_lowercase())
        .collect();
    Ok(report)
}

pub fn run(request: &RunRequest) -> Result<(InvariantReport, CacheStatus), CliError> {
    let params = request.input.resolve()?;
    let flavors = canonical_flavors(&request.flavors);
    if request.truncation == Some(0) {
        return Err(CliError::InvalidInput("--truncate must be positive".into()));
    }
    let truncation = flavors
        .contains(&Flavor::Minus)
        .then(|| request.truncation.unwrap_or(2 * params.p() as u32));
    let Some(dir) = &request.cache_dir else {
        return Ok((
            compute(params, &flavors, truncation, request.validate)?,
            CacheStatus::Disabled,
        ));
    };
    let path = dir.join(format!(
        "{}.json",
        cache_key(&params, &flavors, truncation, request.validate)
    ));
    if let Some(report) = cache_read(&path) {
        return Ok((report, CacheStatus::Hit));
    }
    let report = compute(params, &flavors, truncation, request.validate)?;
    cache_write(dir, &path, &report)?;
    Ok((report, CacheStatus::Miss))
}

pub fn render(report: &InvariantReport, format: Format) -> String {
    match format {
        Format::Json => render_json(report),
        Format::Tsv => render_tsv(report),
        Format::Text => render_text(report),
    }
}

pub fn render_json(report: &InvariantReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn entries(e: &[twobridge_hfk::complex::HfkEntry]) -> String {
    e.iter()
        .map(|e| format!("{}:{}:{}", e.alexander, e.maslov, e.rank))
        .collect::<Vec<_>>()
        .join(";")
}

/// One row per sector.
pub fn render_tsv(report: &InvariantReport) -> String {
    let mut out = String::from("p\tq\tlabel\td\ttau\tfiltered_rank\thfk\thfk_knot\n");
    for s in &report.sectors {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            report.params.p(),
            report.params.q(),
            s.label,
            s.d,
            s.tau,
            s.filtered_rank,
            entries(&s.hfk),
            entries(&s.hfk_knot)
        );
    }
    out
}

pub fn render_text(report: &InvariantReport) -> String {
    let d = &report.diagnostics;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "two-bridge knot {} in its double branched cover",
        report.params
    );
    let _ = writeln!(
        out,
        "generators {}, parallelograms {}, faces {}",
        d.generators, d.parallelograms, d.faces
    );
    let _ = writeln!(out, "Alexander polynomial {}", report.alexander_polynomial);
    if d.calibration_ambiguous {
        let _ = writeln!(
            out,
            "note: d-labels use calibration unit {} (other units give other labelings)",
            d.calibration_unit
        );
    }
    if let Some(v) = d.oracle_validated {
        let _ = writeln!(out, "oracle validated: {v}");
    }
    for s in &report.sectors {
        let _ = writeln!(
            out,
            "sector {:>3}  d = {:<8} tau = {:<3} knot HFK:",
            s.label,
            s.d.to_string(),
            s.tau
        );
        for e in &s.hfk_knot {
            let _ = writeln!(
                out,
                "    A = {:>3}  M = {:<8} rank {}",
                e.alexander,
                e.maslov.to_string(),
                e.rank
            );
        }
        if let Some(m) = &s.minus {
            let ranks: Vec<String> = m
                .ranks
                .iter()
                .map(|r| format!("{}:{}", r.maslov, r.rank))
                .collect();
            let _ = writeln!(
                out,
                "    minus (N = {}, down to M = {}): {}",
                m.truncation,
                m.window_floor,
                ranks.join(" ")
            );
        }
    }
    out
}

/// Summary row per knot class with odd `p <= p_max`.
pub fn batch(
    p_max: i64,
    flavors: &[Flavor],
    truncation: Option<u32>,
    cache_dir: Option<&Path>,
) -> Result<Vec<InvariantReport>, CliError> {
    if p_max < 3 {
        return Err(CliError::InvalidInput("--batch needs P_MAX >= 3".into()));
    }
    knot_classes(p_max)
        .into_par_iter()
        .map(|params| {
            let request = RunRequest {
                input: Input::Params {
                    p: params.p(),
                    q: params.q(),
                },
                flavors: flavors.to_vec(),
                truncation,
                validate: false,
                cache_dir: cache_dir.map(Path::to_path_buf),
            };
            run(&request).map(|(r, _)| r)
        })
        .collect()
}

pub fn render_batch_tsv(reports: &[InvariantReport]) -> String {
    let mut out = String::from("p\tq\td\ttau\thfk_knot_ranks\talexander\n");
    for r in reports {
        let join = |f: &dyn Fn(&twobridge_hfk::complex::SectorReport) -> String| {
            r.sectors.iter().map(f).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.params.p(),
            r.params.q(),
            join(&|s| s.d.to_string()),
            join(&|s| s.tau.to_string()),
            join(&|s| s.hfk_knot.iter().map(|e| e.rank).sum::<usize>().to_string()),
            r.alexander_polynomial
        );
    }
    out
}
