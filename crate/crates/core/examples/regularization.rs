//! Roots of `a + 1/n` converge to the root of a singular `a` at rate
//! `n^{-1/2}`, bounded by `n^{-1/2} ‖(a + 1)^{-1/2}‖`.

use msr_lab::msr::{regularization_bound, regularization_sandwich};
use msr_lab::{SymMatrix, ToleranceConfig};

fn main() -> msr_lab::Result<()> {
    let cfg = ToleranceConfig::default();
    let a = SymMatrix::from_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 4.0]])?;
    println!("eigenvalues of a: {:?}", a.eigenvalues());
    println!("{:>9} {:>12} {:>12} {:>12}", "n", "‖Δ‖", "bound", "√n‖Δ‖");
    for n in [1u64, 10, 100, 1_000, 10_000, 100_000, 1_000_000] {
        let b = regularization_bound(&a, n, &cfg)?;
        println!(
            "{n:>9} {:>12.4e} {:>12.4e} {:>12.6}",
            b.lhs,
            b.rhs,
            b.lhs * (n as f64).sqrt()
        );
        let (lower, upper) = regularization_sandwich(&a, n, &cfg)?;
        assert!(lower.holds && upper.holds);
    }
    let zero = regularization_bound(&SymMatrix::zeros(3), 100, &cfg)?;
    println!("a = 0: ‖Δ‖ = {} = bound {}", zero.lhs, zero.rhs);
    Ok(())
}
