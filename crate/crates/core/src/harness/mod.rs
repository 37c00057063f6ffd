//! Seeded suites, file formats and benchmarks behind the `msr` binary.
//!
//! A suite draws one random instance per trial from
//! [`SplitMix64::for_trial`]`(seed, k)` and runs its checks on it. Trials are
//! independent, so they run in parallel, but records are collected in trial
//! order and reports are byte-identical for a fixed configuration at any
//! thread count.
//!
//! Every check produces a [`CheckRecord`] with a signed `margin` and a
//! `threshold`; it passes iff `margin ≥ −threshold`. Order checks report a
//! smallest eigenvalue, error checks report `−error`.

mod bench;
mod files;
mod suites;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockDump;
use crate::error::{MsrError, Result};
use crate::rng::SplitMix64;
use crate::sym::{ToleranceConfig, MAX_DIM};

pub use bench::{bench_csv, bench_svg, denman_beavers, run_bench, BenchConfig, BenchRecord, DenmanBeavers};
pub use files::{read_matrix, read_state, sqrt_command, write_matrix, MatrixFile, SqrtMethod, SqrtOutput};

/// Environment variable that replaces the configured seed.
pub const SEED_ENV: &str = "MSR_SEED";

pub const DEFAULT_SEED: u64 = 42;

/// The checks a suite can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// `√a ≤ √b` on random pairs `a ≤ b`.
    Msr,
    /// Regularization bound, resolvent monotonicity and contraction,
    /// antitone inverse.
    Lemmas,
    /// Positivity and norm through states, and the state integral formula.
    States,
    /// Joint diagonalization and the function representation `Ψ`.
    Blocks,
    /// Quadrature square root against the spectral one.
    Integral,
    /// `t²`, `t³`, `eᵗ` must fail somewhere while `√t` never does.
    NegativeControl,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Msr,
        Suite::Lemmas,
        Suite::States,
        Suite::Blocks,
        Suite::Integral,
        Suite::NegativeControl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Msr => "msr",
            Suite::Lemmas => "lemmas",
            Suite::States => "states",
            Suite::Blocks => "blocks",
            Suite::Integral => "integral",
            Suite::NegativeControl => "negative-control",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Suite {
    type Err = MsrError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| MsrError::Input(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = MsrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(MsrError::Input(format!("unknown format `{s}` (json or csv)"))),
        }
    }
}

/// Parses `"2..8"` (inclusive), `"2,3,5"` or a single dimension.
pub fn parse_dims(spec: &str) -> Result<Vec<usize>> {
    let bad = || MsrError::Input(format!("malformed dimension list `{spec}`"));
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let dims = if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (parse(lo)?, parse(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        spec.split(',').map(parse).collect::<Result<Vec<_>>>()?
    };
    if dims.is_empty() {
        return Err(bad());
    }
    Ok(dims)
}

/// Reads [`SEED_ENV`]; `Ok(None)` when unset.
pub fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| MsrError::Input(format!("{SEED_ENV} must be a u64, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub quad_nodes: usize,
    pub tolerances: ToleranceConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Where to write the block of trial 0 (blocks suite only).
    pub dump_block: Option<PathBuf>,
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            seed: DEFAULT_SEED,
            dims: (2..=8).collect(),
            trials: 1000,
            quad_nodes: 256,
            tolerances: ToleranceConfig::default(),
            out: None,
            format: Format::Json,
            dump_block: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(MsrError::Input("trials must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(MsrError::Input("no dimensions given".into()));
        }
        if let Some(d) = self.dims.iter().find(|d| !(1..=MAX_DIM).contains(*d)) {
            return Err(MsrError::Input(format!("dimension {d} outside 1..={MAX_DIM}")));
        }
        if self.quad_nodes < 2 {
            return Err(MsrError::Input(format!(
                "quad-nodes must be at least 2, got {}",
                self.quad_nodes
            )));
        }
        if self.threads == Some(0) {
            return Err(MsrError::Input("threads must be at least 1".into()));
        }
        if self.dump_block.is_some() && self.suite != Suite::Blocks {
            return Err(MsrError::Input("--dump-block only applies to the blocks suite".into()));
        }
        self.tolerances.validate()
    }

    fn dim_for(&self, trial: u64) -> usize {
        self.dims[(trial % self.dims.len() as u64) as usize]
    }
}

/// One check on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub trial: u64,
    pub dim: usize,
    pub check: String,
    pub margin: f64,
    pub threshold: f64,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.margin >= -self.threshold
    }
}

/// The JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub trials: u64,
    /// Failing records. For the negative control these are the expected
    /// counterexamples.
    pub violations: Vec<CheckRecord>,
    /// Smallest margin over all records.
    pub worst_margin: f64,
    pub tolerances: ToleranceConfig,
    pub dims: Vec<usize>,
    pub quad_nodes: usize,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub report: Report,
    pub records: Vec<CheckRecord>,
    pub block_dump: Option<BlockDump>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }

    /// `suite,seed,dim,trial,check,margin,verdict`, one row per record.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("suite,seed,dim,trial,check,margin,verdict\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{},{},{},{:e},{}\n",
                self.report.suite,
                self.report.seed,
                r.dim,
                r.trial,
                r.check,
                r.margin,
                if r.passed() { "pass" } else { "fail" }
            ));
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Runs a suite and, when configured, writes the report and block dump.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    config.validate()?;
    let rule = crate::quadrature::make_rule(config.quad_nodes)?;
    let ctx = suites::Context { config, rule: &rule };
    let run = || -> Vec<CheckRecord> {
        (0..config.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = SplitMix64::for_trial(config.seed, trial);
                suites::run_trial(&ctx, trial, config.dim_for(trial), &mut rng)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    let records = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| MsrError::Input(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let violations: Vec<CheckRecord> = records.iter().filter(|r| !r.passed()).cloned().collect();
    let passed = match config.suite {
        Suite::NegativeControl => suites::negative_control_passed(&records),
        _ => violations.is_empty(),
    };
    let worst_margin = records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let block_dump = match config.suite {
        Suite::Blocks => Some(suites::first_block(config)?),
        _ => None,
    };
    let outcome = SuiteOutcome {
        report: Report {
            suite: config.suite,
            seed: config.seed,
            trials: config.trials,
            violations,
            worst_margin,
            tolerances: config.tolerances,
            dims: config.dims.clone(),
            quad_nodes: config.quad_nodes,
            passed,
        },
        records,
        block_dump,
    };

    if let Some(path) = &config.out {
        write_text(path, &outcome.render(config.format))?;
    }
    if let (Some(path), Some(dump)) = (&config.dump_block, &outcome.block_dump) {
        let mut json = serde_json::to_string_pretty(dump).expect("dump serializes");
        json.push('\n');
        write_text(path, &json)?;
    }
    Ok(outcome)
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| MsrError::Input(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| MsrError::Input(format!("cannot read {}: {e}", path.display())))
}
