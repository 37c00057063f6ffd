//! The Loewner order, positivity and the order-unit norm on 2×2 matrices.

use msr_lab::sym::{self, loewner_leq, projection_check};
use msr_lab::{SymMatrix, ToleranceConfig};

fn main() -> msr_lab::Result<()> {
    let cfg = ToleranceConfig::default();
    let a = SymMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]])?;
    let b = SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]])?;

    println!("a = {a:?}\nb = {b:?}");
    println!("eigenvalues of a: {:?}", a.eigenvalues());
    println!("‖a‖ = {}, ‖b‖ = {:.6}", sym::order_unit_norm(&a), b.norm());

    let report = loewner_leq(&a, &b, &cfg)?;
    println!("a ≤ b: {} (margin {:e})", report.holds, report.margin);
    let report = loewner_leq(&b, &a, &cfg)?;
    println!("b ≤ a: {} (margin {:e})", report.holds, report.margin);

    // Absolute value and the positive/negative parts.
    let c = SymMatrix::diag(&[3.0, -2.0]);
    let abs = sym::abs(&c);
    let plus = (&abs + &c).scale(0.5);
    println!("|c| = {abs:?}, c⁺ = {plus:?}");

    // Projections form a lattice when they commute.
    let p = projection_check(&SymMatrix::diag(&[1.0, 0.0, 1.0]), &cfg)?;
    let q = projection_check(&SymMatrix::diag(&[1.0, 1.0, 0.0]), &cfg)?;
    println!("p ∧ q = {:?}", p.meet(&q, &cfg)?.matrix());
    println!("p ∨ q = {:?}", p.join(&q, &cfg)?.matrix());
    Ok(())
}
