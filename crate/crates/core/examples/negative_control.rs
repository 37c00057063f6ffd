//! `t²`, `t³` and `eᵗ` are monotone on scalars but not on matrices; `√t` is.

use msr_lab::msr::{counterexample_search, counterexample_search_in, FunctionTag, PairFamily};

fn main() -> msr_lab::Result<()> {
    let (trials, seed) = (1000, 42);
    for dim in [2, 4, 8] {
        for tag in FunctionTag::ALL {
            let found = counterexample_search(tag, dim, trials, seed)?;
            let worst = found.iter().map(|v| v.margin).fold(0.0, f64::min);
            println!(
                "dim {dim} {tag:<6}: {:>4} violations in {trials} pairs, worst margin {worst:.3e}",
                found.len()
            );
        }
    }

    let first = &counterexample_search(FunctionTag::Square, 2, trials, seed)?[0];
    println!("\nfirst square counterexample (trial {}):", first.trial);
    println!(
        "  a = {:?}\n  b = {:?}\n  min eig(b² − a²) = {:e}",
        first.a, first.b, first.margin
    );

    // Commuting pairs reduce to scalars, where the square is monotone.
    let diagonal = counterexample_search_in(PairFamily::Diagonal, FunctionTag::Square, 4, trials, seed)?;
    println!("\ndiagonal pairs, square: {} violations", diagonal.len());
    Ok(())
}
