//! The Gauss–Legendre rule for `√t = ∫ t/(λ+t) dμ(λ)` after `λ = tan²θ`.

use msr_lab::quadrature::{calibration_grid, make_rule, CALIBRATION_RANGE};

fn main() -> msr_lab::Result<()> {
    let rule = make_rule(8)?;
    println!("{} nodes ({}):", rule.node_count(), rule.scheme());
    for (l, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  λ = {l:>14.6e}  w = {w:.6e}");
    }

    println!(
        "\nworst error over t ∈ [{}, {}]:",
        CALIBRATION_RANGE.0, CALIBRATION_RANGE.1
    );
    for n in [8, 16, 32, 64, 128, 256] {
        println!("  N = {n:>3}: {:.3e}", make_rule(n)?.calibration_error());
    }

    let rule = make_rule(128)?;
    for t in [1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4] {
        println!(
            "t = {t:>6.0e}: rule {:.12}, exact {:.12}",
            rule.scalar_sqrt(t),
            f64::sqrt(t)
        );
    }
    println!("{} calibration points", calibration_grid().len());
    Ok(())
}
