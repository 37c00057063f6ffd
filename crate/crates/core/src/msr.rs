//! Monotonicity of the square root, step by step.
//!
//! The argument runs in three stages, each of which is a function here:
//!
//! 1. *Reduction to invertible elements.* For `a ≥ 0` the shifted element
//!    `a + 1/n` is invertible and
//!    `0 ≤ (a + 1/n)^{1/2} − a^{1/2} ≤ n^{-1/2} (a + 1)^{-1/2}`, so roots of
//!    the shifts converge in norm at rate `n^{-1/2}`
//!    ([`regularized_sqrt`], [`regularization_bound`],
//!    [`regularization_sandwich`]). Since the positive cone is closed, a
//!    limit of nonnegative margins is nonnegative.
//! 2. *Integral representation.* For invertible `a ≥ 0` and every state
//!    `ω`, `ω(a^{1/2}) = ∫₀^∞ ω(a(λ + a)^{-1}) dμ(λ)` with
//!    `dμ = (1/π) λ^{-1/2} dλ` ([`state_integral_identity`]). States
//!    separate points, so the same identity holds at the matrix level;
//!    [`sqrt_integral`] evaluates it with the rule from
//!    [`crate::quadrature`].
//! 3. *Resolvent monotonicity.* If `0 ≤ a ≤ b` then
//!    `(λ + b)^{-1} ≤ (λ + a)^{-1}`, hence
//!    `a(λ + a)^{-1} = 1 − λ(λ + a)^{-1} ≤ 1 − λ(λ + b)^{-1} = b(λ + b)^{-1}`
//!    for every `λ ≥ 0` ([`antitone_inverse_check`],
//!    [`resolvent_monotone_check`]). Integrating against the positive
//!    measure `μ` gives `a^{1/2} ≤ b^{1/2}` ([`msr_check`]).
//!
//! [`counterexample_search`] is the negative control: `t²`, `t³` and `eᵗ`
//! are monotone on scalars but not on matrices.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, DMatrix};
use serde::{Deserialize, Serialize};

use crate::blocks::CommutativeBlock;
use crate::corpus::{self, PsdPair};
use crate::error::{check_dims, MsrError, Result};
use crate::quadrature::QuadratureRule;
use crate::rng::SplitMix64;
use crate::states::{eval, induced_measure, State};
use crate::sym::{
    inverse, invertibility_margin, loewner_leq, order_unit_norm, sqrt_spectral, OrderCheckReport, SymMatrix,
    ToleranceConfig,
};

/// Smallest invertibility margin [`sqrt_integral`] works with directly.
pub const MIN_INTEGRAL_MARGIN: f64 = 1e-12;

/// Regularization ladder `n = 10^0, …, 10^6`.
pub const LADDER: [u64; 7] = [1, 10, 100, 1_000, 10_000, 100_000, 1_000_000];

/// The ladder stops once successive margins differ by less than this.
pub const LADDER_STOP: f64 = 1e-10;

fn require_psd(a: &SymMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    let values = a.eigenvalues();
    let norm = values[0].abs().max(values[values.len() - 1].abs());
    let allowed = cfg.psd_tol * norm.max(1.0);
    if values[0] < -allowed {
        return Err(MsrError::NotPositive {
            min_eigenvalue: values[0],
            allowed,
        });
    }
    Ok(values[0])
}

/// `0 ≤ a ≤ b`, as a hypothesis: violations are errors, not verdicts.
fn require_ordered_pair(a: &SymMatrix, b: &SymMatrix, cfg: &ToleranceConfig) -> Result<()> {
    check_dims(a.n(), b.n())?;
    if let Err(MsrError::NotPositive { min_eigenvalue, .. }) = require_psd(a, cfg) {
        return Err(MsrError::Hypothesis(format!(
            "a is not positive (min eigenvalue {min_eigenvalue:e})"
        )));
    }
    let order = loewner_leq(a, b, cfg)?;
    if !order.holds {
        return Err(MsrError::Hypothesis(format!("a ≤ b fails (margin {:e})", order.margin)));
    }
    Ok(())
}

// (λ + a)^{-1} a by a Cholesky solve; `a` must be PSD and λ > 0.
fn resolvent_unchecked(a: &SymMatrix, lambda: f64) -> SymMatrix {
    let shifted = a.shift(lambda).into_matrix();
    let x = match Cholesky::new(shifted.clone()) {
        Some(chol) => chol.solve(a.as_matrix()),
        None => shifted
            .lu()
            .solve(a.as_matrix())
            .unwrap_or_else(|| DMatrix::from_element(a.n(), a.n(), f64::NAN)),
    };
    SymMatrix::from_nearly_symmetric(x)
}

/// The resolvent term `a(λ + a)^{-1} = 1 − λ(λ + a)^{-1}`, for `a ≥ 0` and
/// `λ > 0`. Always between `0` and `1`.
pub fn resolvent_term(a: &SymMatrix, lambda: f64, cfg: &ToleranceConfig) -> Result<SymMatrix> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(MsrError::Input(format!("λ must be positive, got {lambda}")));
    }
    require_psd(a, cfg)?;
    Ok(resolvent_unchecked(a, lambda))
}

/// `1 − λ(λ + a)^{-1}`, the other side of the resolvent identity.
pub fn resolvent_complement(a: &SymMatrix, lambda: f64, cfg: &ToleranceConfig) -> Result<SymMatrix> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(MsrError::Input(format!("λ must be positive, got {lambda}")));
    }
    let inv = inverse(&a.shift(lambda), cfg)?;
    Ok(&SymMatrix::identity(a.n()) - &inv.scale(lambda))
}

/// Square root by quadrature, with metadata about how it was obtained.
#[derive(Debug, Clone)]
pub struct IntegralSqrt {
    pub value: SymMatrix,
    /// The input was (nearly) singular and was shifted before integrating.
    pub regularized: bool,
    pub shift: f64,
    /// A priori bound on `‖value − a^{1/2}‖`: the rule's scalar error
    /// maximized over the spectrum, plus `√shift` when regularized.
    pub error_bound: f64,
}

/// `a^{1/2} ≈ Σ_k w_k a(λ_k + a)^{-1}`.
///
/// Only linear solves enter the value; the spectrum is used for the PSD
/// check and the error bound. Inputs with invertibility margin below
/// [`MIN_INTEGRAL_MARGIN`] are shifted to margin `1e-12` and flagged.
pub fn sqrt_integral(a: &SymMatrix, rule: &QuadratureRule, cfg: &ToleranceConfig) -> Result<IntegralSqrt> {
    let min = require_psd(a, cfg)?;
    let (work, shift) = if min < MIN_INTEGRAL_MARGIN {
        let shift = MIN_INTEGRAL_MARGIN - min.min(0.0);
        (a.shift(shift), shift)
    } else {
        (a.clone(), 0.0)
    };
    let n = a.n();
    let mut acc = DMatrix::zeros(n, n);
    for (lambda, w) in rule.nodes().iter().zip(rule.weights()) {
        acc += resolvent_unchecked(&work, *lambda).into_matrix() * *w;
    }
    let error_bound = work
        .eigenvalues()
        .iter()
        .map(|t| rule.scalar_error(*t))
        .fold(0.0, f64::max)
        + shift.sqrt();
    Ok(IntegralSqrt {
        value: SymMatrix::from_nearly_symmetric(acc),
        regularized: shift > 0.0,
        shift,
        error_bound,
    })
}

/// `(a + 1/n)^{1/2}`, which is invertible for `a ≥ 0`.
pub fn regularized_sqrt(a: &SymMatrix, n: u64, cfg: &ToleranceConfig) -> Result<SymMatrix> {
    if n == 0 {
        return Err(MsrError::Input("regularization index must be positive".into()));
    }
    require_psd(a, cfg)?;
    sqrt_spectral(&a.shift(1.0 / n as f64), cfg)
}

/// Both sides of `‖(a + 1/n)^{1/2} − a^{1/2}‖ ≤ n^{-1/2} ‖(a + 1)^{-1/2}‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl RegularizationBound {
    /// `rhs − lhs`; nonnegative when the bound holds.
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

pub fn regularization_bound(a: &SymMatrix, n: u64, cfg: &ToleranceConfig) -> Result<RegularizationBound> {
    let shifted = regularized_sqrt(a, n, cfg)?;
    let root = sqrt_spectral(a, cfg)?;
    let lhs = order_unit_norm(&(&shifted - &root));
    let inv_root = inverse(&sqrt_spectral(&a.shift(1.0), cfg)?, cfg)?;
    let rhs = order_unit_norm(&inv_root) / (n as f64).sqrt();
    Ok(RegularizationBound { lhs, rhs })
}

/// The order form of the same estimate:
/// `0 ≤ (a + 1/n)^{1/2} − a^{1/2}` and
/// `(a + 1/n)^{1/2} − a^{1/2} ≤ n^{-1/2}(a + 1)^{-1/2}`.
pub fn regularization_sandwich(
    a: &SymMatrix,
    n: u64,
    cfg: &ToleranceConfig,
) -> Result<(OrderCheckReport, OrderCheckReport)> {
    let diff = &regularized_sqrt(a, n, cfg)? - &sqrt_spectral(a, cfg)?;
    let upper = inverse(&sqrt_spectral(&a.shift(1.0), cfg)?, cfg)?.scale(1.0 / (n as f64).sqrt());
    let zero = SymMatrix::zeros(a.n());
    Ok((loewner_leq(&zero, &diff, cfg)?, loewner_leq(&diff, &upper, cfg)?))
}

/// `a(λ + a)^{-1} ≤ b(λ + b)^{-1}` for `0 ≤ a ≤ b`.
pub fn resolvent_monotone_check(
    a: &SymMatrix,
    b: &SymMatrix,
    lambda: f64,
    cfg: &ToleranceConfig,
) -> Result<OrderCheckReport> {
    require_ordered_pair(a, b, cfg)?;
    let ra = resolvent_term(a, lambda, cfg)?;
    let rb = resolvent_term(b, lambda, cfg)?;
    loewner_leq(&ra, &rb, cfg)
}

/// `b^{-1} ≤ a^{-1}` for `0 ≤ a ≤ b` with `a` invertible.
pub fn antitone_inverse_check(a: &SymMatrix, b: &SymMatrix, cfg: &ToleranceConfig) -> Result<OrderCheckReport> {
    require_ordered_pair(a, b, cfg)?;
    let margin = invertibility_margin(a);
    if margin <= cfg.psd_tol * order_unit_norm(a).max(1.0) {
        return Err(MsrError::Hypothesis(format!("a is not invertible (margin {margin:e})")));
    }
    let inv_a = inverse(a, cfg)?;
    let inv_b = inverse(b, cfg)?;
    loewner_leq(&inv_b, &inv_a, cfg)
}

/// How square roots are computed in [`msr_check`].
#[derive(Debug, Clone, Copy)]
pub enum MsrMethod<'r> {
    Spectral,
    Integral(&'r QuadratureRule),
    /// Spectral roots of `a + 1/n`, `b + 1/n` along [`LADDER`].
    Regularized,
}

impl MsrMethod<'_> {
    pub fn tag(&self) -> &'static str {
        match self {
            MsrMethod::Spectral => "spectral",
            MsrMethod::Integral(_) => "integral",
            MsrMethod::Regularized => "regularized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderStep {
    pub n: u64,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventMargin {
    pub lambda: f64,
    pub margin: f64,
}

/// Outcome of a monotone-square-root check on one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsrReport {
    pub hypothesis_ok: bool,
    pub method: String,
    /// Smallest eigenvalue of `b^{1/2} − a^{1/2}`.
    pub sqrt_margin: f64,
    /// `psd_tol · max(1, ‖b‖^{1/2})`.
    pub threshold: f64,
    pub verdict: bool,
    pub tolerances: ToleranceConfig,
    /// Quadrature had to shift a (nearly) singular input.
    pub auto_regularized: bool,
    pub ladder: Vec<LadderStep>,
    pub resolvent_margins: Vec<ResolventMargin>,
}

fn margin_of(lower: &SymMatrix, upper: &SymMatrix) -> f64 {
    (upper - lower).min_eigenvalue()
}

/// `0 ≤ a ≤ b ⟹ a^{1/2} ≤ b^{1/2}`, verified on one pair.
pub fn msr_check(a: &SymMatrix, b: &SymMatrix, method: MsrMethod<'_>, cfg: &ToleranceConfig) -> Result<MsrReport> {
    require_ordered_pair(a, b, cfg)?;
    let mut auto_regularized = false;
    let mut ladder = Vec::new();
    let sqrt_margin = match method {
        MsrMethod::Spectral => margin_of(&sqrt_spectral(a, cfg)?, &sqrt_spectral(b, cfg)?),
        MsrMethod::Integral(rule) => {
            let ra = sqrt_integral(a, rule, cfg)?;
            let rb = sqrt_integral(b, rule, cfg)?;
            auto_regularized = ra.regularized || rb.regularized;
            margin_of(&ra.value, &rb.value)
        }
        MsrMethod::Regularized => {
            let mut last: Option<f64> = None;
            for n in LADDER {
                let margin = margin_of(&regularized_sqrt(a, n, cfg)?, &regularized_sqrt(b, n, cfg)?);
                ladder.push(LadderStep { n, margin });
                if last.is_some_and(|prev| (margin - prev).abs() < LADDER_STOP) {
                    break;
                }
                last = Some(margin);
            }
            ladder.last().expect("ladder is nonempty").margin
        }
    };
    let threshold = cfg.psd_tol * order_unit_norm(b).sqrt().max(1.0);
    Ok(MsrReport {
        hypothesis_ok: true,
        method: method.tag().to_string(),
        sqrt_margin,
        threshold,
        verdict: sqrt_margin >= -threshold,
        tolerances: *cfg,
        auto_regularized,
        ladder,
        resolvent_margins: Vec::new(),
    })
}

/// [`msr_check`] plus the resolvent margins at each `λ` in `lambdas`.
pub fn msr_check_with_resolvents(
    a: &SymMatrix,
    b: &SymMatrix,
    method: MsrMethod<'_>,
    lambdas: &[f64],
    cfg: &ToleranceConfig,
) -> Result<MsrReport> {
    let mut report = msr_check(a, b, method, cfg)?;
    for &lambda in lambdas {
        let r = resolvent_monotone_check(a, b, lambda, cfg)?;
        report.resolvent_margins.push(ResolventMargin {
            lambda,
            margin: r.margin,
        });
    }
    Ok(report)
}

/// `lhs = ω(a^{1/2})` against `rhs = Σ_k w_k ω(a(λ_k + a)^{-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityGap {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Quadrature form of `ω(a^{1/2}) = ∫₀^∞ ω(a(λ+a)^{-1}) dμ(λ)` for an
/// invertible `a ≥ 0`.
pub fn state_integral_identity(
    omega: &State,
    a: &SymMatrix,
    rule: &QuadratureRule,
    cfg: &ToleranceConfig,
) -> Result<IdentityGap> {
    check_dims(omega.n(), a.n())?;
    require_psd(a, cfg)?;
    let margin = invertibility_margin(a);
    if margin <= cfg.psd_tol * order_unit_norm(a).max(1.0) {
        return Err(MsrError::NotInvertible { margin });
    }
    let lhs = eval(omega, &sqrt_spectral(a, cfg)?)?;
    let terms = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(lambda, w)| eval(omega, &resolvent_unchecked(a, *lambda)).map(|v| w * v))
        .collect::<Result<Vec<_>>>()?;
    let rhs = compensated_sum(terms);
    Ok(IdentityGap {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

/// Neumaier's compensated summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Both iterated sums of `m({x}) w_k f(x)/(λ_k + f(x))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FubiniGap {
    /// `Σ_x m({x}) Σ_k w_k f(x)/(λ_k + f(x))`
    pub points_outer: f64,
    /// `Σ_k w_k Σ_x m({x}) f(x)/(λ_k + f(x))`
    pub nodes_outer: f64,
    pub gap: f64,
}

/// Exchanging the point sum and the quadrature sum for `f = Ψ(a)`.
pub fn fubini_check(
    omega: &State,
    a: &SymMatrix,
    block: &CommutativeBlock,
    rule: &QuadratureRule,
) -> Result<FubiniGap> {
    check_dims(omega.n(), a.n())?;
    let f = block.psi(a)?;
    if let Some(bad) = f.iter().find(|v| v.is_nan() || **v <= 0.0) {
        return Err(MsrError::NotInvertible { margin: bad.abs() });
    }
    let m = induced_measure(omega, block)?;
    let nodes = rule.nodes();
    let weights = rule.weights();
    let points_outer = compensated_sum(
        f.iter()
            .zip(&m.weights)
            .map(|(fx, mx)| mx * compensated_sum(nodes.iter().zip(weights).map(|(l, w)| w * fx / (l + fx)))),
    );
    let nodes_outer = compensated_sum(
        nodes
            .iter()
            .zip(weights)
            .map(|(l, w)| w * compensated_sum(f.iter().zip(&m.weights).map(|(fx, mx)| mx * fx / (l + fx)))),
    );
    Ok(FubiniGap {
        points_outer,
        nodes_outer,
        gap: (points_outer - nodes_outer).abs(),
    })
}

/// Scalar functions tried by [`counterexample_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionTag {
    Square,
    Cube,
    Exp,
    /// Control: operator monotone, never violated.
    Sqrt,
}

impl FunctionTag {
    pub const ALL: [FunctionTag; 4] = [
        FunctionTag::Square,
        FunctionTag::Cube,
        FunctionTag::Exp,
        FunctionTag::Sqrt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FunctionTag::Square => "square",
            FunctionTag::Cube => "cube",
            FunctionTag::Exp => "exp",
            FunctionTag::Sqrt => "sqrt",
        }
    }

    /// `f(a)` by functional calculus. The square is the plain product `a·a`.
    pub fn apply(&self, a: &SymMatrix) -> SymMatrix {
        match self {
            FunctionTag::Square => a.square(),
            FunctionTag::Cube => a.eig().map(|t| t * t * t),
            FunctionTag::Exp => a.eig().map(f64::exp),
            FunctionTag::Sqrt => a.eig().map(|t| t.max(0.0).sqrt()),
        }
    }
}

impl fmt::Display for FunctionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for FunctionTag {
    type Err = MsrError;

    fn from_str(s: &str) -> Result<Self> {
        FunctionTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| MsrError::UnknownTag(s.to_string()))
    }
}

/// Which random pairs a search draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFamily {
    /// `b = a + cᵀc` with dense `a`, `c` ([`corpus::psd_pair`]).
    General,
    /// Diagonal, hence commuting, pairs ([`corpus::diagonal_pair`]).
    Diagonal,
}

/// A pair `0 ≤ a ≤ b` with `f(a) ≰ f(b)`.
#[derive(Debug, Clone)]
pub struct Violation {
    pub trial: u64,
    pub a: SymMatrix,
    pub b: SymMatrix,
    /// Smallest eigenvalue of `f(b) − f(a)`.
    pub margin: f64,
}

/// Smallest eigenvalue of `f(b) − f(a)` and the threshold it is judged by,
/// `1e-8 · max(1, ‖f(b)‖)`.
pub fn monotonicity_margin(tag: FunctionTag, a: &SymMatrix, b: &SymMatrix) -> (f64, f64) {
    let fa = tag.apply(a);
    let fb = tag.apply(b);
    (margin_of(&fa, &fb), 1e-8 * order_unit_norm(&fb).max(1.0))
}

/// Seeded search for pairs `0 ≤ a ≤ b` on which `f` fails to be monotone.
pub fn counterexample_search(tag: FunctionTag, dim: usize, trials: u64, seed: u64) -> Result<Vec<Violation>> {
    counterexample_search_in(PairFamily::General, tag, dim, trials, seed)
}

pub fn counterexample_search_in(
    family: PairFamily,
    tag: FunctionTag,
    dim: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<Violation>> {
    if dim == 0 || dim > crate::sym::MAX_DIM {
        return Err(MsrError::Input(format!("dimension {dim} out of range")));
    }
    let mut found = Vec::new();
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let PsdPair { a, b } = match family {
            PairFamily::General => corpus::psd_pair(&mut rng, dim),
            PairFamily::Diagonal => corpus::diagonal_pair(&mut rng, dim),
        };
        let (margin, threshold) = monotonicity_margin(tag, &a, &b);
        if margin < -threshold {
            found.push(Violation { trial, a, b, margin });
        }
    }
    Ok(found)
}
