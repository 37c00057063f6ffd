//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdict lines are always printed; exits nonzero if any criterion
//! fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{jacobi, min_eig_2x2, sqrt_2x2, sub, Jacobi};
use msr_lab::blocks::build_block;
use msr_lab::corpus;
use msr_lab::harness::{run_bench, run_suite, BenchConfig, Suite, SuiteConfig};
use msr_lab::msr::{
    antitone_inverse_check, counterexample_search, monotonicity_margin, msr_check, regularization_bound,
    resolvent_monotone_check, sqrt_integral, state_integral_identity, FunctionTag, MsrMethod,
};
use msr_lab::quadrature::make_rule;
use msr_lab::rng::SplitMix64;
use msr_lab::states::{norm_via_states, positivity_via_states, State};
use msr_lab::sym::{order_unit_norm, sqrt_spectral};
use msr_lab::{SymMatrix, ToleranceConfig};

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn scalar_identity() -> Outcome {
    let start = Instant::now();
    let rule = make_rule(128).expect("rule");
    let worst = (0..101)
        .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 100.0))
        .map(|t| (rule.scalar_sqrt(t) - t.sqrt()).abs())
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-8 && secs < 1.0,
        format!("N=128, 101 points on [1e-2,1e2]: worst error {worst:.2e} (≤ 1e-8), {secs:.3}s (< 1s)"),
    )
}

fn msr_corpus() -> Outcome {
    let start = Instant::now();
    let config = SuiteConfig {
        seed: SEED,
        trials: 10_000,
        ..SuiteConfig::new(Suite::Msr)
    };
    let out = run_suite(&config).expect("suite runs");
    let secs = start.elapsed().as_secs_f64();
    // Independent recomputation of the worst normalized margin.
    let mut worst = f64::INFINITY;
    for r in &out.records {
        let mut rng = SplitMix64::for_trial(SEED, r.trial);
        let pair = corpus::psd_pair(&mut rng, r.dim);
        let diff = sub(&common::sqrt(&pair.b), &common::sqrt(&pair.a));
        let margin = common::min_eig(r.dim, &diff);
        worst = worst.min(margin / Jacobi::of(&pair.b).norm().sqrt().max(1.0));
    }
    let violations = out.records.iter().filter(|r| !r.passed()).count();
    outcome(
        out.records.len() == 10_000 && violations == 0 && worst >= -1e-8 && secs < 60.0,
        format!(
            "10000 pairs, dims 2-8: {violations} violations, worst margin {:.2e}, oracle worst normalized margin {worst:.2e} (≥ -1e-8), {secs:.2}s (< 60s)",
            out.report.worst_margin
        ),
    )
}

fn regularization() -> Outcome {
    let indices = [1u64, 10, 100, 10_000];
    let mut worst = f64::INFINITY;
    for k in 0..1000u64 {
        let mut rng = SplitMix64::for_trial(SEED + 3, k);
        let n = rng.int_in(2, 8);
        let a = corpus::random_psd(&mut rng, n);
        let idx = indices[(k % 4) as usize];
        worst = worst.min(regularization_bound(&a, idx, &cfg()).expect("bound").slack());
    }
    let mut equality = 0.0f64;
    for idx in indices {
        let b = regularization_bound(&SymMatrix::zeros(4), idx, &cfg()).expect("bound");
        let exact = 1.0 / (idx as f64).sqrt();
        equality = equality.max((b.lhs - b.rhs).abs()).max((b.lhs - exact).abs());
    }
    outcome(
        worst >= -1e-10 && equality <= 1e-12,
        format!("1000 (a, n): worst slack {worst:.2e} (≥ -1e-10); at a = 0 |lhs - rhs| ≤ {equality:.1e} (≤ 1e-12)"),
    )
}

fn state_formula() -> Outcome {
    let rule = make_rule(256).expect("rule");
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for k in 0..1000u64 {
        let mut rng = SplitMix64::for_trial(SEED + 4, k);
        let n = rng.int_in(2, 8);
        let omega = State::random(&mut rng, n);
        let a = corpus::random_pd(&mut rng, n, 1e-3);
        let gap = state_integral_identity(&omega, &a, &rule, &cfg()).expect("identity");
        worst = worst.max(gap.gap);
        let root = common::sqrt(&a);
        let rho = omega.rho().to_row_major();
        let lhs: f64 = rho.iter().zip(&root).map(|(x, y)| x * y).sum();
        worst_oracle = worst_oracle.max((lhs - gap.rhs).abs());
    }
    outcome(
        worst <= 1e-7 && worst_oracle <= 1e-7,
        format!(
            "1000 (ρ, a), margin ≥ 1e-3, N=256: worst gap {worst:.2e}, against Jacobi root {worst_oracle:.2e} (≤ 1e-7)"
        ),
    )
}

fn resolvent_chain() -> Outcome {
    let lambdas = [0.01, 0.1, 1.0, 10.0, 100.0];
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for k in 0..10_000u64 {
        let mut rng = SplitMix64::for_trial(SEED, k);
        let n = 2 + (k % 7) as usize;
        let pair = corpus::psd_pair(&mut rng, n);
        for lambda in lambdas {
            let r = resolvent_monotone_check(&pair.a, &pair.b, lambda, &cfg()).expect("resolvent");
            worst = worst.min(r.margin);
            count += 1;
        }
    }
    outcome(
        worst >= -1e-9,
        format!("{count} (pair, λ) with λ ∈ {{0.01,…,100}}: worst margin {worst:.2e} (≥ -1e-9)"),
    )
}

fn antitone_inverse() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut worst_oracle = f64::INFINITY;
    for k in 0..1000u64 {
        let mut rng = SplitMix64::for_trial(SEED + 6, k);
        let n = rng.int_in(2, 8);
        let pair = corpus::invertible_pair(&mut rng, n, 1e-3);
        worst = worst.min(
            antitone_inverse_check(&pair.a, &pair.b, &cfg())
                .expect("antitone")
                .margin,
        );
        let inv_a = Jacobi::of(&pair.a).map(|t| 1.0 / t);
        let inv_b = Jacobi::of(&pair.b).map(|t| 1.0 / t);
        worst_oracle = worst_oracle.min(common::min_eig(n, &sub(&inv_a, &inv_b)));
    }
    outcome(
        worst >= -1e-9 && worst_oracle >= -1e-9,
        format!("1000 invertible pairs: worst margin {worst:.2e}, Jacobi oracle {worst_oracle:.2e} (≥ -1e-9)"),
    )
}

fn function_representation() -> Outcome {
    let (mut mult, mut iso, mut order) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..500u64 {
        let mut rng = SplitMix64::for_trial(SEED + 7, k);
        let n = rng.int_in(1, 8);
        let family = corpus::commuting_family(&mut rng, n);
        let block = build_block(&family, &cfg()).expect("block");
        let psi: Vec<Vec<f64>> = family.iter().map(|x| block.psi(x).expect("psi")).collect();
        for (x, px) in family.iter().zip(&psi) {
            let sup = px.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            iso = iso.max((sup - Jacobi::of(x).norm()).abs());
            for (y, py) in family.iter().zip(&psi) {
                let xy = x.product(y).symmetric_part();
                for ((p, u), v) in block.psi(&xy).expect("psi").iter().zip(px).zip(py) {
                    mult = mult.max((p - u * v).abs());
                }
                let by_points = py.iter().zip(px).map(|(v, u)| v - u).fold(f64::INFINITY, f64::min);
                let exact = common::min_eig(n, &sub(&y.to_row_major(), &x.to_row_major()));
                order = order.max((exact - by_points).abs());
            }
        }
    }
    outcome(
        mult <= 1e-8 && iso <= 1e-8 && order <= 1e-8,
        format!("500 families: multiplicativity {mult:.2e}, isometry {iso:.2e}, order {order:.2e} (≤ 1e-8)"),
    )
}

fn states_decide() -> Outcome {
    let mut disagreements = 0;
    let mut positives = 0;
    let mut worst_norm = 0.0f64;
    for k in 0..1000u64 {
        let mut rng = SplitMix64::for_trial(SEED + 8, k);
        let n = rng.int_in(1, 8);
        let a = if k % 2 == 0 {
            corpus::random_psd(&mut rng, n)
        } else {
            corpus::random_symmetric(&mut rng, n)
        };
        let verdict = positivity_via_states(&a, &cfg()).expect("verdict");
        let j = Jacobi::of(&a);
        let oracle = j.min() >= -cfg().psd_tol * j.norm().max(1.0);
        positives += usize::from(oracle);
        if verdict.positive != oracle || !verdict.consistent {
            disagreements += 1;
        }
        worst_norm = worst_norm.max((norm_via_states(&a).expect("norm") - j.norm()).abs());
    }
    outcome(
        disagreements == 0 && worst_norm <= 1e-9,
        format!("1000 matrices ({positives} PSD): {disagreements} verdict disagreements, worst norm gap {worst_norm:.2e} (≤ 1e-9)"),
    )
}

fn negative_control() -> Outcome {
    let found = counterexample_search(FunctionTag::Square, 2, 1000, SEED).expect("search");
    let a = [[1.0, 1.0], [1.0, 1.0]];
    let b = [[2.0, 1.0], [1.0, 1.0]];
    let (ma, mb) = (
        SymMatrix::from_rows(&a).expect("a"),
        SymMatrix::from_rows(&b).expect("b"),
    );
    let (square_margin, threshold) = monotonicity_margin(FunctionTag::Square, &ma, &mb);
    let (ra, rb) = (sqrt_2x2(a), sqrt_2x2(b));
    let oracle = min_eig_2x2([
        [rb[0][0] - ra[0][0], rb[0][1] - ra[0][1]],
        [rb[1][0] - ra[1][0], rb[1][1] - ra[1][1]],
    ]);
    let report = msr_check(&ma, &mb, MsrMethod::Spectral, &cfg()).expect("msr");
    let passed = !found.is_empty()
        && square_margin < -threshold
        && (square_margin - min_eig_2x2([[3.0, 1.0], [1.0, 0.0]])).abs() < 1e-12
        && report.verdict
        && (report.sqrt_margin - oracle).abs() < 1e-12
        && (oracle - 0.068).abs() < 5e-4;
    outcome(
        passed,
        format!(
            "square: {} violations in 1000 dim-2 pairs; explicit pair min eig(b²−a²) = {square_margin:.6}, min eig(√b−√a) = {:.6} (closed form {oracle:.6})",
            found.len(),
            report.sqrt_margin
        ),
    )
}

fn oracle_agreement() -> Outcome {
    let rule = make_rule(256).expect("rule");
    let mut worst = 0.0f64;
    for k in 0..1000u64 {
        let mut rng = SplitMix64::for_trial(SEED + 10, k);
        let n = rng.int_in(1, 8);
        let a = corpus::random_pd(&mut rng, n, 1e-6);
        let quad = sqrt_integral(&a, &rule, &cfg()).expect("integral").value;
        let exact = sqrt_spectral(&a, &cfg()).expect("spectral");
        let scale = order_unit_norm(&a).sqrt().max(1.0);
        worst = worst.max(order_unit_norm(&(&quad - &exact)) / scale);
        let oracle = common::sqrt(&a);
        let gap = common::norm(n, &sub(&quad.to_row_major(), &oracle));
        worst = worst.max(gap / scale);
    }
    let records = run_bench(&BenchConfig::new(vec![8], vec![8, 16, 32, 64, 128])).expect("bench");
    let errors: Vec<f64> = records
        .iter()
        .filter(|r| r.method == "integral")
        .map(|r| r.error)
        .collect();
    let decreasing = errors.windows(2).all(|p| p[1] < p[0]);
    let shown: Vec<String> = errors.iter().map(|e| format!("{e:.1e}")).collect();
    outcome(
        worst <= 1e-7 && decreasing && errors.len() == 5,
        format!(
            "1000 matrices, margin ≥ 1e-6, N=256: worst normalized gap {worst:.2e} (≤ 1e-7); bench dim 8, N=8..128 errors [{}] strictly decreasing: {decreasing}",
            shown.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    // Sanity check that the oracle itself is sound before trusting it.
    let j = jacobi(2, &[2.0, 1.0, 1.0, 2.0]);
    assert!((j.values[0] - 1.0).abs() < 1e-15 && (j.values[1] - 3.0).abs() < 1e-15);

    let criteria: [Criterion; 10] = [
        ("scalar integral identity", scalar_identity),
        ("monotone square root corpus", msr_corpus),
        ("regularization bound", regularization),
        ("state integral formula", state_formula),
        ("resolvent monotonicity", resolvent_chain),
        ("antitone inverse", antitone_inverse),
        ("functional representation", function_representation),
        ("states determine order and norm", states_decide),
        ("negative control", negative_control),
        ("quadrature vs spectral oracle", oracle_agreement),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.passed);
        println!(
            "[{}] {:>2}. {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
