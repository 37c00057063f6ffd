//! States `ω(a) = trace(ρa)`: they decide positivity and the norm, and they
//! carry the integral formula for the square root.

use msr_lab::blocks::build_block;
use msr_lab::msr::{fubini_check, state_integral_identity};
use msr_lab::quadrature::make_rule;
use msr_lab::rng::SplitMix64;
use msr_lab::states::{
    functional_is_state, induced_measure, norm_via_states, positivity_via_states, LinearFunctional, State,
};
use msr_lab::{SymMatrix, ToleranceConfig};

fn main() -> msr_lab::Result<()> {
    let cfg = ToleranceConfig::default();
    let mut rng = SplitMix64::new(2024);
    let a = SymMatrix::from_rows(&[[2.0, -1.0], [-1.0, 0.5]])?;

    let v = positivity_via_states(&a, &cfg)?;
    println!(
        "a ≥ 0: {}  (min over vector states {:.6}, over {} random states {:.6})",
        v.positive,
        v.exact_min,
        msr_lab::states::SAMPLED_STATES,
        v.sampled_min
    );
    println!("‖a‖ = {:.6}, sup |ω(a)| = {:.6}", a.norm(), norm_via_states(&a)?);

    let omega = State::random(&mut rng, 2);
    println!("ω(a) = {:.6} for ρ = {:?}", omega.eval(&a)?, omega.rho());
    let cert = functional_is_state(&LinearFunctional::new(SymMatrix::diag(&[0.7, 0.3])));
    println!("diag(0.7, 0.3) is a state: {}", cert.is_state);
    let cert = functional_is_state(&LinearFunctional::new(SymMatrix::diag(&[1.2, -0.2])));
    println!(
        "diag(1.2, −0.2): positive {}, dual norm {}",
        cert.is_positive, cert.dual_norm
    );

    let pd = SymMatrix::from_rows(&[[3.0, 1.0], [1.0, 2.0]])?;
    let rule = make_rule(256)?;
    let gap = state_integral_identity(&omega, &pd, &rule, &cfg)?;
    println!("ω(√a) = {:.12}, Σ w_k ω(a(λ_k+a)⁻¹) = {:.12}", gap.lhs, gap.rhs);

    let block = build_block(std::slice::from_ref(&pd), &cfg)?;
    let m = induced_measure(&omega, &block)?;
    println!("induced measure on {} points: {:?}", block.x_size(), m.weights);
    let f = fubini_check(&omega, &pd, &block, &rule)?;
    println!("sum orders agree to {:e}", f.gap);
    Ok(())
}
