//! `0 ≤ a ≤ b ⟹ √a ≤ √b` on a pair where `a² ≤ b²` fails, checked with
//! every square-root method.

use msr_lab::msr::{monotonicity_margin, msr_check, msr_check_with_resolvents, FunctionTag, MsrMethod};
use msr_lab::quadrature::make_rule;
use msr_lab::{SymMatrix, ToleranceConfig};

fn main() -> msr_lab::Result<()> {
    let cfg = ToleranceConfig::default();
    let a = SymMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]])?;
    let b = SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]])?;

    let (margin, _) = monotonicity_margin(FunctionTag::Square, &a, &b);
    println!("min eig(b² − a²) = {margin:.6}  (the square is not monotone)");

    let rule = make_rule(256)?;
    for method in [MsrMethod::Spectral, MsrMethod::Integral(&rule), MsrMethod::Regularized] {
        let r = msr_check(&a, &b, method, &cfg)?;
        println!(
            "{:<11} min eig(√b − √a) = {:.9}  verdict {}  auto-regularized {}",
            r.method, r.sqrt_margin, r.verdict, r.auto_regularized
        );
        for step in &r.ladder {
            println!("    n = {:>7}: {:.9}", step.n, step.margin);
        }
    }

    let r = msr_check_with_resolvents(&a, &b, MsrMethod::Spectral, &[0.01, 0.1, 1.0, 10.0, 100.0], &cfg)?;
    for m in &r.resolvent_margins {
        println!("λ = {:>6}: min eig(b(λ+b)⁻¹ − a(λ+a)⁻¹) = {:.3e}", m.lambda, m.margin);
    }

    // A pair violating the hypothesis is an error, not a negative verdict.
    println!("{:?}", msr_check(&b, &a, MsrMethod::Spectral, &cfg).unwrap_err());
    Ok(())
}
