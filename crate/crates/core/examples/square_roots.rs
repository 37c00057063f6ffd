//! Four routes to the square root of one matrix, compared against the
//! spectral one.

use msr_lab::harness::denman_beavers;
use msr_lab::msr::{regularized_sqrt, sqrt_integral};
use msr_lab::quadrature::make_rule;
use msr_lab::sym::{order_unit_norm, sqrt_spectral};
use msr_lab::{SymMatrix, ToleranceConfig};

fn main() -> msr_lab::Result<()> {
    let cfg = ToleranceConfig::default();
    let a = SymMatrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]])?;
    let exact = sqrt_spectral(&a, &cfg)?;
    println!("spectral root: {exact:?}");
    println!("‖root² − a‖ = {:e}", order_unit_norm(&(&exact.square() - &a)));

    for n in [16, 64, 128, 256] {
        let r = sqrt_integral(&a, &make_rule(n)?, &cfg)?;
        let gap = order_unit_norm(&(&r.value - &exact));
        println!(
            "quadrature N = {n:>3}: gap {gap:.3e}, a priori bound {:.3e}",
            r.error_bound
        );
    }

    for n in [1u64, 100, 10_000, 1_000_000] {
        let gap = order_unit_norm(&(&regularized_sqrt(&a, n, &cfg)? - &exact));
        println!("(a + 1/{n})^(1/2): gap {gap:.3e}");
    }

    let db = denman_beavers(&a, 50, 1e-13, &cfg)?;
    println!(
        "Denman–Beavers: {} iterations, residual {:.3e}, gap {:.3e}",
        db.iterations,
        db.residual,
        order_unit_norm(&(&db.value - &exact))
    );

    // A singular input is shifted by 1e-12 before integrating.
    let singular = SymMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]])?;
    let r = sqrt_integral(&singular, &make_rule(128)?, &cfg)?;
    println!("singular input: regularized = {}, shift = {:e}", r.regularized, r.shift);
    Ok(())
}
