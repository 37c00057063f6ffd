//! Joint diagonalization of a commuting family and its representation as
//! functions on a finite point set.

use msr_lab::blocks::{build_block, commutes};
use msr_lab::{SymMatrix, ToleranceConfig};

fn main() -> msr_lab::Result<()> {
    let cfg = ToleranceConfig::default();
    let a = SymMatrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 3.0]])?;
    let b = &a.square() - &a.scale(4.0);
    println!("[a, b] = 0: {}", commutes(&a, &b, &cfg)?.commutes);

    let block = build_block(&[a.clone(), b.clone()], &cfg)?;
    println!("{} points, cells {:?}", block.x_size(), block.cells());
    for (k, p) in block.projections().iter().enumerate() {
        println!("P_{k} = {:?}", p.matrix());
    }

    let rep = block.function_rep();
    let (fa, fb) = (rep.psi(&a)?, rep.psi(&b)?);
    println!("Ψ(a) = {fa:?}\nΨ(b) = {fb:?}");

    // Ψ is multiplicative, isometric and invertible.
    let ab = a.product(&b).symmetric_part();
    let fab = rep.psi(&ab)?;
    let mult: f64 = fab
        .iter()
        .zip(fa.iter().zip(&fb))
        .map(|(p, (x, y))| (p - x * y).abs())
        .fold(0.0, f64::max);
    println!("max |Ψ(ab) − Ψ(a)Ψ(b)| = {mult:e}");
    println!("‖a‖ = {}, sup |Ψ(a)| = {}", a.norm(), rep.sup_norm(&a)?);
    println!("Ψ⁻¹(Ψ(a)) − a = {:e}", rep.inverse(&fa)?.max_abs_diff(&a));

    let outside = SymMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])?;
    println!("e₁e₁ᵀ in block: {}", block.contains(&outside));
    let maximal = block.maximal_extension(&cfg)?;
    println!("maximal extension has {} points", maximal.x_size());

    println!(
        "{}",
        serde_json::to_string_pretty(&block.dump()?).expect("dump serializes")
    );
    Ok(())
}
