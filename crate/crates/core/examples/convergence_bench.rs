//! Integral-method error against node count, with the Denman–Beavers
//! iteration for comparison. Writes `convergence.svg` to the temp directory.

use msr_lab::harness::{bench_csv, run_bench, BenchConfig};

fn main() -> msr_lab::Result<()> {
    let svg = std::env::temp_dir().join("convergence.svg");
    let config = BenchConfig {
        svg: Some(svg.clone()),
        ..BenchConfig::new(vec![2, 8, 16], vec![8, 16, 32, 64, 128, 256])
    };
    let records = run_bench(&config)?;
    print!("{}", bench_csv(&records));
    println!("plot written to {}", svg.display());
    Ok(())
}
