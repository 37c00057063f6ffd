//! Discrete surrogate for the measure `dμ(λ) = (1/π) λ^{-1/2} dλ` on
//! `(0, ∞)`, which represents the square root as
//!
//! ```text
//! √t = ∫₀^∞ t / (λ + t) dμ(λ),     t > 0.
//! ```
//!
//! The substitution `λ = tan²θ` turns `λ^{-1/2} dλ` into `2 sec²θ dθ`, so
//!
//! ```text
//! √t = (2/π) ∫₀^{π/2} t sec²θ / (tan²θ + t) dθ
//!    = (2/π) ∫₀^{π/2} t / (sin²θ + t cos²θ) dθ,
//! ```
//!
//! a smooth integrand on a finite interval that does not depend on `t`
//! through the change of variables. Gauss–Legendre on `(0, π/2)` then gives
//! nodes `λ_k = tan²θ_k` and weights `w_k = (2/π)(π/4) g_k sec²θ_k`.

use serde::{Deserialize, Serialize};

use crate::error::{MsrError, Result};

/// Lower and upper ends of the calibration grid for `t`.
pub const CALIBRATION_RANGE: (f64, f64) = (1e-2, 1e2);
pub const CALIBRATION_POINTS: usize = 101;

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and positive weights such that `Σ_k w_k t/(λ_k + t) ≈ √t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    scheme: String,
    calibration_error: f64,
}

/// Builds the `N`-node rule and calibrates it on a log grid of `t` over
/// [`CALIBRATION_RANGE`].
pub fn make_rule(node_count: usize) -> Result<QuadratureRule> {
    if node_count < 2 {
        return Err(MsrError::Input(format!(
            "quadrature needs at least 2 nodes, got {node_count}"
        )));
    }
    let (x, g) = gauss_legendre(node_count);
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    let mut nodes = Vec::with_capacity(node_count);
    let mut weights = Vec::with_capacity(node_count);
    for (xk, gk) in x.iter().zip(&g) {
        let theta = quarter_pi * (xk + 1.0);
        let (s, c) = theta.sin_cos();
        nodes.push((s / c) * (s / c));
        weights.push(0.5 * gk / (c * c));
    }
    let mut rule = QuadratureRule {
        nodes,
        weights,
        scheme: "gauss-legendre/tan2".to_string(),
        calibration_error: 0.0,
    };
    rule.calibration_error = calibration_grid()
        .into_iter()
        .map(|t| (rule.scalar_sqrt(t) - t.sqrt()).abs())
        .fold(0.0, f64::max);
    Ok(rule)
}

/// `CALIBRATION_POINTS` log-spaced values over [`CALIBRATION_RANGE`].
pub fn calibration_grid() -> Vec<f64> {
    let (lo, hi) = (CALIBRATION_RANGE.0.log10(), CALIBRATION_RANGE.1.log10());
    (0..CALIBRATION_POINTS)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (CALIBRATION_POINTS - 1) as f64))
        .collect()
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn scheme(&self) -> &str {
        &self.scheme
    }

    /// Largest `|Σ w_k t/(λ_k+t) − √t|` over the calibration grid.
    pub fn calibration_error(&self) -> f64 {
        self.calibration_error
    }

    /// `Σ_k w_k t/(λ_k + t)` for a scalar `t ≥ 0`.
    pub fn scalar_sqrt(&self, t: f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(l, w)| w * t / (l + t)).sum()
    }

    /// Error of the rule at a scalar `t`; used to bound matrix errors by
    /// the spectrum.
    pub fn scalar_error(&self, t: f64) -> f64 {
        (self.scalar_sqrt(t) - t.max(0.0).sqrt()).abs()
    }
}
