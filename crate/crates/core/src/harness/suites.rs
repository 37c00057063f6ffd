use crate::blocks::{build_block, BlockDump};
use crate::corpus::{self, PsdPair};
use crate::error::Result;
use crate::msr::{
    antitone_inverse_check, fubini_check, monotonicity_margin, msr_check, regularization_bound,
    regularization_sandwich, resolvent_complement, resolvent_monotone_check, resolvent_term, sqrt_integral,
    state_integral_identity, FunctionTag, MsrMethod,
};
use crate::quadrature::QuadratureRule;
use crate::rng::SplitMix64;
use crate::states::{
    functional_is_state, induced_measure, norm_via_states, positivity_via_states, LinearFunctional, State,
};
use crate::sym::{is_psd, order_unit_norm, sqrt_spectral, SymMatrix};

use super::{CheckRecord, Suite, SuiteConfig};

pub(crate) const MSR_TOL: f64 = 1e-8;
pub(crate) const REGULARIZATION_TOL: f64 = 1e-10;
pub(crate) const LEMMA_TOL: f64 = 1e-9;
pub(crate) const STATE_INTEGRAL_TOL: f64 = 1e-7;
pub(crate) const NORM_TOL: f64 = 1e-9;
pub(crate) const BLOCK_TOL: f64 = 1e-8;
pub(crate) const INTEGRAL_TOL: f64 = 1e-7;

pub(crate) const REGULARIZATION_INDICES: [u64; 4] = [1, 10, 100, 10_000];
pub(crate) const LAMBDAS: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

/// Invertibility floors for the corpora that need them.
const STATE_INTEGRAL_FLOOR: f64 = 1e-3;
const ANTITONE_FLOOR: f64 = 1e-3;
const INTEGRAL_FLOOR: f64 = 1e-6;

pub(crate) struct Context<'a> {
    pub config: &'a SuiteConfig,
    pub rule: &'a QuadratureRule,
}

struct Recorder {
    trial: u64,
    dim: usize,
    records: Vec<CheckRecord>,
}

impl Recorder {
    fn margin(&mut self, check: &str, margin: f64, threshold: f64) {
        self.records.push(CheckRecord {
            trial: self.trial,
            dim: self.dim,
            check: check.to_string(),
            margin,
            threshold,
        });
    }

    fn error(&mut self, check: &str, error: f64, tol: f64) {
        self.margin(check, -error, tol);
    }
}

pub(crate) fn run_trial(ctx: &Context<'_>, trial: u64, dim: usize, rng: &mut SplitMix64) -> Vec<CheckRecord> {
    let mut rec = Recorder {
        trial,
        dim,
        records: Vec::new(),
    };
    let suite = ctx.config.suite;
    let result = match suite {
        Suite::Msr => msr_trial(ctx, &mut rec, rng),
        Suite::Lemmas => lemmas_trial(ctx, &mut rec, rng),
        Suite::States => states_trial(ctx, &mut rec, rng),
        Suite::Blocks => blocks_trial(ctx, &mut rec, rng),
        Suite::Integral => integral_trial(ctx, &mut rec, rng),
        Suite::NegativeControl => negative_trial(&mut rec, rng),
    };
    // An error on generated input is a failure of the library, not of the
    // configuration, so it is recorded as a failing check.
    if result.is_err() {
        rec.margin(&format!("{suite}-error"), f64::NAN, 0.0);
    }
    rec.records
}

fn msr_trial(ctx: &Context<'_>, rec: &mut Recorder, rng: &mut SplitMix64) -> Result<()> {
    let PsdPair { a, b } = corpus::psd_pair(rng, rec.dim);
    let report = msr_check(&a, &b, MsrMethod::Spectral, &ctx.config.tolerances)?;
    rec.margin("msr", report.sqrt_margin, MSR_TOL * order_unit_norm(&b).sqrt().max(1.0));
    Ok(())
}

fn lemmas_trial(ctx: &Context<'_>, rec: &mut Recorder, rng: &mut SplitMix64) -> Result<()> {
    let cfg = &ctx.config.tolerances;
    let n = REGULARIZATION_INDICES[(rec.trial % REGULARIZATION_INDICES.len() as u64) as usize];
    let a = corpus::random_psd(rng, rec.dim);
    rec.margin(
        "regularization",
        regularization_bound(&a, n, cfg)?.slack(),
        REGULARIZATION_TOL,
    );
    let (lower, upper) = regularization_sandwich(&a, n, cfg)?;
    rec.margin(
        "sandwich",
        lower.margin.min(upper.margin),
        lower.threshold.max(upper.threshold),
    );

    let PsdPair { a, b } = corpus::psd_pair(rng, rec.dim);
    let one = SymMatrix::identity(rec.dim);
    for lambda in LAMBDAS {
        rec.margin(
            "resolvent",
            resolvent_monotone_check(&a, &b, lambda, cfg)?.margin,
            LEMMA_TOL,
        );
        let e = resolvent_term(&a, lambda, cfg)?;
        let contraction = e.min_eigenvalue().min((&one - &e).min_eigenvalue());
        rec.margin("contraction", contraction, LEMMA_TOL);
        let other = resolvent_complement(&a, lambda, cfg)?;
        rec.error("resolvent-identity", e.max_abs_diff(&other), LEMMA_TOL);
    }

    let PsdPair { a, b } = corpus::invertible_pair(rng, rec.dim, ANTITONE_FLOOR);
    rec.margin("antitone", antitone_inverse_check(&a, &b, cfg)?.margin, LEMMA_TOL);
    Ok(())
}

fn states_trial(ctx: &Context<'_>, rec: &mut Recorder, rng: &mut SplitMix64) -> Result<()> {
    let cfg = &ctx.config.tolerances;
    let a = if rec.trial.is_multiple_of(2) {
        corpus::random_psd(rng, rec.dim)
    } else {
        corpus::random_symmetric(rng, rec.dim)
    };
    let verdict = positivity_via_states(&a, cfg)?;
    let agree = verdict.positive == is_psd(&a, cfg) && verdict.consistent;
    rec.margin("positivity", if agree { 0.0 } else { -1.0 }, 0.0);
    rec.error("norm", (norm_via_states(&a)? - order_unit_norm(&a)).abs(), NORM_TOL);

    let omega = State::random(rng, rec.dim);
    let cert = functional_is_state(&LinearFunctional::new(omega.rho().clone()));
    let cert_error = if cert.is_state {
        (cert.dual_norm - 1.0).abs()
    } else {
        f64::INFINITY
    };
    rec.error("state-certificate", cert_error, NORM_TOL);
    let a = corpus::random_pd(rng, rec.dim, STATE_INTEGRAL_FLOOR);
    let gap = state_integral_identity(&omega, &a, ctx.rule, cfg)?;
    rec.error("state-integral", gap.gap, STATE_INTEGRAL_TOL);
    Ok(())
}

fn blocks_trial(ctx: &Context<'_>, rec: &mut Recorder, rng: &mut SplitMix64) -> Result<()> {
    let cfg = &ctx.config.tolerances;
    let family = corpus::commuting_family(rng, rec.dim);
    let block = build_block(&family, cfg)?;
    let mut mult = 0.0f64;
    let mut iso = 0.0f64;
    let mut order = 0.0f64;
    let mut inverse = 0.0f64;
    for x in &family {
        let px = block.psi(x)?;
        let sup = px.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        iso = iso.max((sup - order_unit_norm(x)).abs());
        inverse = inverse.max(block.element(&px)?.max_abs_diff(x));
        for y in &family {
            let py = block.psi(y)?;
            let pxy = block.psi(&x.product(y).symmetric_part())?;
            for ((p, u), v) in pxy.iter().zip(&px).zip(&py) {
                mult = mult.max((p - u * v).abs());
            }
            let by_points = py.iter().zip(&px).map(|(v, u)| v - u).fold(f64::INFINITY, f64::min);
            order = order.max(((y - x).min_eigenvalue() - by_points).abs());
        }
    }
    rec.error("multiplicative", mult, BLOCK_TOL);
    rec.error("isometry", iso, BLOCK_TOL);
    rec.error("order", order, BLOCK_TOL);
    rec.error("inverse", inverse, BLOCK_TOL);

    let omega = State::random(rng, rec.dim);
    rec.error(
        "measure",
        (induced_measure(&omega, &block)?.total() - 1.0).abs(),
        BLOCK_TOL,
    );
    let base = &family[0];
    let positive = base.shift(1.0 - base.min_eigenvalue());
    rec.error(
        "fubini",
        fubini_check(&omega, &positive, &block, ctx.rule)?.gap,
        BLOCK_TOL,
    );
    Ok(())
}

fn integral_trial(ctx: &Context<'_>, rec: &mut Recorder, rng: &mut SplitMix64) -> Result<()> {
    let cfg = &ctx.config.tolerances;
    let a = corpus::random_pd(rng, rec.dim, INTEGRAL_FLOOR);
    let quad = sqrt_integral(&a, ctx.rule, cfg)?;
    let exact = sqrt_spectral(&a, cfg)?;
    rec.error(
        "integral",
        order_unit_norm(&(&quad.value - &exact)),
        INTEGRAL_TOL * order_unit_norm(&a).sqrt().max(1.0),
    );
    Ok(())
}

fn negative_trial(rec: &mut Recorder, rng: &mut SplitMix64) -> Result<()> {
    let PsdPair { a, b } = corpus::psd_pair(rng, rec.dim);
    for tag in FunctionTag::ALL {
        let (margin, threshold) = monotonicity_margin(tag, &a, &b);
        rec.margin(tag.name(), margin, threshold);
    }
    Ok(())
}

/// The square must fail at least once and the square root never.
pub(crate) fn negative_control_passed(records: &[CheckRecord]) -> bool {
    let square_found = records.iter().any(|r| r.check == "square" && !r.passed());
    let sqrt_clean = records.iter().filter(|r| r.check == "sqrt").all(CheckRecord::passed);
    let no_errors = records.iter().all(|r| !r.check.ends_with("-error"));
    square_found && sqrt_clean && no_errors
}

/// The block built in trial 0, for `--dump-block`.
pub(crate) fn first_block(config: &SuiteConfig) -> Result<BlockDump> {
    let mut rng = SplitMix64::for_trial(config.seed, 0);
    let family = corpus::commuting_family(&mut rng, config.dim_for(0));
    build_block(&family, &config.tolerances)?.dump()
}
