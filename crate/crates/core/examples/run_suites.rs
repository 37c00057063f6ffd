//! Every seeded suite at small size, as the `msr run` command would.

use msr_lab::harness::{run_suite, Suite, SuiteConfig};

fn main() -> msr_lab::Result<()> {
    for suite in Suite::ALL {
        let config = SuiteConfig {
            trials: 200,
            ..SuiteConfig::new(suite)
        };
        let out = run_suite(&config)?;
        println!(
            "{:<17} {:>5} checks  {:>4} failing  worst margin {:>11.3e}  {}",
            suite.name(),
            out.records.len(),
            out.report.violations.len(),
            out.report.worst_margin,
            if out.passed() { "pass" } else { "FAIL" }
        );
    }

    let config = SuiteConfig {
        trials: 3,
        dims: vec![2],
        ..SuiteConfig::new(Suite::Msr)
    };
    print!("\n{}", run_suite(&config)?.to_csv());
    Ok(())
}
