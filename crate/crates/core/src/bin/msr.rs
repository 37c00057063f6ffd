//! `msr run | sqrt | bench`. Exit codes: 0 ok, 1 property violation,
//! 2 input or configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use msr_lab::harness::{
    self, env_seed, parse_dims, read_matrix, run_bench, run_suite, sqrt_command, BenchConfig, Format, SqrtMethod,
    Suite, SuiteConfig,
};
use msr_lab::{MsrError, ToleranceConfig};

#[derive(Parser)]
#[command(
    name = "msr",
    version,
    about = "Monotone square root laboratory for real symmetric matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded suite and write a report.
    Run {
        /// msr, lemmas, states, blocks, integral or negative-control.
        #[arg(long)]
        suite: String,
        /// Overridden by MSR_SEED when set.
        #[arg(long, default_value_t = harness::DEFAULT_SEED)]
        seed: u64,
        /// `2..8`, `2,4,8` or `5`.
        #[arg(long, default_value = "2..8")]
        dims: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 256)]
        quad_nodes: usize,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// json or csv.
        #[arg(long, default_value = "json")]
        format: String,
        /// Write the block of trial 0 as JSON (blocks suite).
        #[arg(long)]
        dump_block: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        psd_tol: f64,
    },
    /// Square root of a matrix file.
    Sqrt {
        #[arg(long = "in")]
        input: PathBuf,
        /// spectral, integral or regularized.
        #[arg(long, default_value = "spectral")]
        method: String,
        /// Quadrature nodes (integral) or regularization index n (regularized).
        #[arg(long)]
        nodes: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare spectral, quadrature and Denman–Beavers roots.
    Bench {
        #[arg(long, default_value = "8")]
        dims: String,
        #[arg(long, default_value = "8,16,32,64,128")]
        nodes_list: String,
        #[arg(long, default_value_t = harness::DEFAULT_SEED)]
        seed: u64,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<bool, MsrError> {
    match command {
        Command::Run {
            suite,
            seed,
            dims,
            trials,
            quad_nodes,
            out,
            format,
            dump_block,
            threads,
            psd_tol,
        } => {
            let format: Format = format.parse()?;
            let config = SuiteConfig {
                seed: env_seed()?.unwrap_or(seed),
                dims: parse_dims(&dims)?,
                trials,
                quad_nodes,
                tolerances: ToleranceConfig::default().with_psd_tol(psd_tol),
                out: out.clone(),
                format,
                dump_block,
                threads,
                ..SuiteConfig::new(suite.parse::<Suite>()?)
            };
            let outcome = run_suite(&config)?;
            if out.is_none() {
                print!("{}", outcome.render(format));
            }
            eprintln!(
                "{}: {} trials, {} violations, worst margin {:e}: {}",
                outcome.report.suite,
                outcome.report.trials,
                outcome.report.violations.len(),
                outcome.report.worst_margin,
                if outcome.passed() { "ok" } else { "FAILED" }
            );
            Ok(outcome.passed())
        }
        Command::Sqrt {
            input,
            method,
            nodes,
            out,
        } => {
            let cfg = ToleranceConfig::default();
            let method: SqrtMethod = method.parse()?;
            let count = nodes.unwrap_or(match method {
                SqrtMethod::Regularized => 1_000_000,
                _ => 128,
            });
            let a = read_matrix(&input, &cfg)?;
            let json = sqrt_command(&a, method, count, &cfg)?.to_json();
            match out {
                Some(path) => std::fs::write(&path, json)
                    .map_err(|e| MsrError::Input(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{json}"),
            }
            Ok(true)
        }
        Command::Bench {
            dims,
            nodes_list,
            seed,
            out,
            svg,
        } => {
            let nodes = parse_dims(&nodes_list)?;
            let config = BenchConfig {
                seed: env_seed()?.unwrap_or(seed),
                out: out.clone(),
                svg,
                ..BenchConfig::new(parse_dims(&dims)?, nodes)
            };
            let records = run_bench(&config)?;
            if out.is_none() {
                print!("{}", harness::bench_csv(&records));
            }
            Ok(true)
        }
    }
}
